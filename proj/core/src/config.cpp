#include "curlgs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "curlgs/errors.hpp"
#include "curlgs/io.hpp"

namespace curlgs {
namespace {

struct Location {
  int line = 1;
  int col = 1;
};

[[noreturn]] void fail(std::string_view source, Location loc,
                       const std::string& message) {
  std::ostringstream out;
  out << source << ":" << loc.line << ":" << loc.col << ": " << message;
  throw ConfigError(out.str());
}

struct Entry {
  std::string key;
  std::string value;
  Location key_loc;
  Location value_loc;
  bool used = false;
};

struct SectionData {
  Location loc;
  std::vector<Entry> entries;
};

bool known_section(std::string_view name) {
  return name == "run" || name == "domain" || name == "model" ||
         name == "nonlinearity" || name == "solver" || name == "output";
}

std::string_view trim(std::string_view text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// Flat INI reader: sections of key = value lines, full-line comments with
// '#' or ';'. Tracks locations so every later complaint can point at its
// offending token.
class Document {
 public:
  Document(std::string_view text, std::string_view source) : source_(source) {
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      ++line_no;
      parse_line(line, line_no, current);
      if (eol == text.size()) break;
      pos = eol + 1;
    }
  }

  std::string_view source() const { return source_; }

  const SectionData* find(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
  }

  Entry* get(const std::string& section, const char* key) {
    auto it = sections_.find(section);
    if (it == sections_.end()) return nullptr;
    for (Entry& entry : it->second.entries) {
      if (entry.key == key) {
        entry.used = true;
        return &entry;
      }
    }
    return nullptr;
  }

  // Every documented key must have been fetched by now; leftovers are typos.
  void reject_unused() const {
    for (const auto& [name, section] : sections_) {
      for (const Entry& entry : section.entries) {
        if (!entry.used) {
          fail(source_, entry.key_loc,
               "unknown key '" + entry.key + "' in section [" + name + "]");
        }
      }
    }
  }

 private:
  void parse_line(std::string_view line, int line_no, std::string& current) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return;
    if (line[first] == '#' || line[first] == ';') return;
    if (line[first] == '[') {
      std::size_t close = line.find(']', first);
      if (close == std::string_view::npos) {
        fail(source_, {line_no, static_cast<int>(first) + 1},
             "unterminated section header");
      }
      std::string name(trim(line.substr(first + 1, close - first - 1)));
      if (name.empty()) {
        fail(source_, {line_no, static_cast<int>(first) + 1},
             "empty section name");
      }
      if (!known_section(name)) {
        fail(source_, {line_no, static_cast<int>(first) + 1},
             "unknown section [" + name +
                 "]; expected run, domain, model, nonlinearity, solver, or "
                 "output");
      }
      if (sections_.count(name)) {
        fail(source_, {line_no, static_cast<int>(first) + 1},
             "duplicate section [" + name + "]");
      }
      if (!trim(line.substr(close + 1)).empty()) {
        fail(source_, {line_no, static_cast<int>(close) + 2},
             "trailing text after section header");
      }
      sections_[name].loc = {line_no, static_cast<int>(first) + 1};
      current = name;
      return;
    }
    if (current.empty()) {
      fail(source_, {line_no, static_cast<int>(first) + 1},
           "key outside of a section; start with a [section] header");
    }
    std::size_t eq = line.find('=', first);
    if (eq == std::string_view::npos) {
      fail(source_, {line_no, static_cast<int>(first) + 1},
           "expected 'key = value'");
    }
    Entry entry;
    entry.key = std::string(trim(line.substr(first, eq - first)));
    entry.key_loc = {line_no, static_cast<int>(first) + 1};
    if (entry.key.empty()) {
      fail(source_, entry.key_loc, "missing key before '='");
    }
    std::string_view raw_value = line.substr(eq + 1);
    std::size_t value_first = raw_value.find_first_not_of(" \t\r");
    if (value_first == std::string_view::npos) {
      fail(source_, {line_no, static_cast<int>(eq) + 2},
           "missing value for key '" + entry.key + "'");
    }
    entry.value = std::string(trim(raw_value));
    entry.value_loc = {line_no, static_cast<int>(eq + 1 + value_first) + 1};
    for (const Entry& existing : sections_[current].entries) {
      if (existing.key == entry.key) {
        fail(source_, entry.key_loc,
             "duplicate key '" + entry.key + "' in section [" + current + "]");
      }
    }
    sections_[current].entries.push_back(std::move(entry));
  }

  std::string_view source_;
  std::map<std::string, SectionData> sections_;
};

struct Token {
  std::string_view text;
  Location loc;
};

std::vector<Token> tokenize(const Entry& entry) {
  std::vector<Token> tokens;
  std::string_view value = entry.value;
  std::size_t pos = 0;
  while (pos < value.size()) {
    while (pos < value.size() && (value[pos] == ' ' || value[pos] == '\t')) {
      ++pos;
    }
    if (pos >= value.size()) break;
    std::size_t end = pos;
    while (end < value.size() && value[end] != ' ' && value[end] != '\t') {
      ++end;
    }
    tokens.push_back(Token{value.substr(pos, end - pos),
                           {entry.value_loc.line,
                            entry.value_loc.col + static_cast<int>(pos)}});
    pos = end;
  }
  return tokens;
}

double parse_double_token(std::string_view source, const Token& token) {
  double out = 0.0;
  const char* begin = token.text.data();
  const char* end = begin + token.text.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(out)) {
    fail(source, token.loc,
         "expected a finite number, got '" + std::string(token.text) + "'");
  }
  return out;
}

long parse_int_token(std::string_view source, const Token& token) {
  long out = 0;
  const char* begin = token.text.data();
  const char* end = begin + token.text.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(source, token.loc,
         "expected an integer, got '" + std::string(token.text) + "'");
  }
  return out;
}

double parse_double(std::string_view source, const Entry& entry) {
  auto tokens = tokenize(entry);
  if (tokens.size() != 1) {
    fail(source, entry.value_loc,
         "key '" + entry.key + "' takes exactly one number");
  }
  return parse_double_token(source, tokens[0]);
}

long parse_int(std::string_view source, const Entry& entry) {
  auto tokens = tokenize(entry);
  if (tokens.size() != 1) {
    fail(source, entry.value_loc,
         "key '" + entry.key + "' takes exactly one integer");
  }
  return parse_int_token(source, tokens[0]);
}

std::uint64_t parse_seed(std::string_view source, const Entry& entry) {
  std::uint64_t out = 0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(source, entry.value_loc,
         "seed must be a nonnegative 64-bit integer");
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view source, const Entry& entry,
                                  std::size_t count, const char* what) {
  auto tokens = tokenize(entry);
  if (count != 0 && tokens.size() != count) {
    std::ostringstream msg;
    msg << what << " takes exactly " << count << " numbers, got "
        << tokens.size();
    fail(source, entry.value_loc, msg.str());
  }
  std::vector<double> out;
  out.reserve(tokens.size());
  for (const Token& token : tokens) {
    out.push_back(parse_double_token(source, token));
  }
  return out;
}

Command parse_command(std::string_view source, const Entry& entry) {
  if (entry.value == "eigs") return Command::eigs;
  if (entry.value == "ground") return Command::ground;
  if (entry.value == "symmetric") return Command::symmetric;
  if (entry.value == "check-nonlinearity") return Command::check_nonlinearity;
  if (entry.value == "oracle") return Command::oracle;
  fail(source, entry.value_loc,
       "unknown command '" + entry.value +
           "'; expected eigs, ground, symmetric, check-nonlinearity, or "
           "oracle");
}

DomainShape parse_shape(std::string_view source, const Entry& entry) {
  if (entry.value == "box") return DomainShape::box;
  if (entry.value == "cylinder") return DomainShape::cylinder;
  fail(source, entry.value_loc,
       "unknown domain shape '" + entry.value + "'; expected box or cylinder");
}

NonlinearityConfig::Kind parse_kind(std::string_view source,
                                    const Entry& entry) {
  if (entry.value == "kerr") return NonlinearityConfig::Kind::kerr;
  if (entry.value == "power") return NonlinearityConfig::Kind::power;
  if (entry.value == "polynomial") return NonlinearityConfig::Kind::polynomial;
  if (entry.value == "zero") return NonlinearityConfig::Kind::zero;
  fail(source, entry.value_loc,
       "unknown nonlinearity kind '" + entry.value +
           "'; expected kerr, power, polynomial, or zero");
}

CoefficientConfig parse_coefficient(std::string_view source,
                                    const Entry& entry) {
  auto tokens = tokenize(entry);
  CoefficientConfig out;
  const std::string shape(tokens.empty() ? "" : tokens[0].text);
  if (shape == "constant") {
    if (tokens.size() != 2) {
      fail(source, entry.value_loc,
           "constant coefficient fields read 'constant <value>'");
    }
    out.kind = CoefficientConfig::Kind::constant;
    out.value = parse_double_token(source, tokens[1]);
    if (!(out.value > 0.0)) {
      fail(source, tokens[1].loc, "coefficient fields must be positive");
    }
    return out;
  }
  if (shape == "step") {
    if (tokens.size() != 5) {
      fail(source, entry.value_loc,
           "step coefficient fields read 'step <axis> <threshold> <low> "
           "<high>'");
    }
    out.kind = CoefficientConfig::Kind::step;
    out.axis = static_cast<int>(parse_int_token(source, tokens[1]));
    if (out.axis < 0 || out.axis > 2) {
      fail(source, tokens[1].loc, "step axis must be 0, 1, or 2");
    }
    out.threshold = parse_double_token(source, tokens[2]);
    out.low = parse_double_token(source, tokens[3]);
    out.high = parse_double_token(source, tokens[4]);
    if (!(out.low > 0.0) || !(out.high > 0.0)) {
      fail(source, tokens[3].loc, "coefficient fields must be positive");
    }
    return out;
  }
  if (shape == "bump") {
    if (tokens.size() != 7) {
      fail(source, entry.value_loc,
           "bump coefficient fields read 'bump <baseline> <amplitude> <cx> "
           "<cy> <cz> <width>'");
    }
    out.kind = CoefficientConfig::Kind::bump;
    out.baseline = parse_double_token(source, tokens[1]);
    out.amplitude = parse_double_token(source, tokens[2]);
    out.center = {parse_double_token(source, tokens[3]),
                  parse_double_token(source, tokens[4]),
                  parse_double_token(source, tokens[5])};
    out.width = parse_double_token(source, tokens[6]);
    if (!(out.baseline + std::min(0.0, out.amplitude) > 0.0)) {
      fail(source, tokens[1].loc,
           "coefficient fields must be positive; the bump's lower bound "
           "baseline + min(0, amplitude) is not");
    }
    if (!(out.width > 0.0)) {
      fail(source, tokens[6].loc, "bump width must be positive");
    }
    return out;
  }
  fail(source, entry.value_loc,
       "unknown coefficient field '" + shape +
           "'; expected constant, step, or bump");
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::eigs: return "eigs";
    case Command::ground: return "ground";
    case Command::symmetric: return "symmetric";
    case Command::check_nonlinearity: return "check-nonlinearity";
    case Command::oracle: return "oracle";
  }
  return "?";
}

const char* to_string(DomainShape shape) {
  return shape == DomainShape::box ? "box" : "cylinder";
}

CoefficientField CoefficientConfig::build() const {
  switch (kind) {
    case Kind::constant:
      return CoefficientField::constant(value);
    case Kind::step:
      return CoefficientField::step(axis, threshold, low, high);
    case Kind::bump:
      return CoefficientField::bump(baseline, amplitude,
                                    Vec3(center[0], center[1], center[2]),
                                    width);
  }
  throw StructuralError("unhandled coefficient field kind");
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  Document doc(text, source);
  RunConfig cfg;

  // [run]
  const SectionData* run_section = doc.find("run");
  if (!run_section) {
    fail(source, {1, 1}, "missing [run] section with the command key");
  }
  Entry* command = doc.get("run", "command");
  if (!command) {
    fail(source, run_section->loc, "missing mandatory key 'command' in [run]");
  }
  cfg.command = parse_command(source, *command);
  if (Entry* seed = doc.get("run", "seed")) {
    cfg.seed = parse_seed(source, *seed);
  }

  // [domain]
  const SectionData* domain = doc.find("domain");
  if (!domain) {
    fail(source, {1, 1}, "missing [domain] section");
  }
  Entry* shape = doc.get("domain", "shape");
  if (!shape) {
    fail(source, domain->loc, "missing mandatory key 'shape' in [domain]");
  }
  cfg.shape = parse_shape(source, *shape);
  if (cfg.command == Command::symmetric && cfg.shape != DomainShape::cylinder) {
    fail(source, shape->value_loc,
         "the symmetric command reduces over a cylinder; set shape = "
         "cylinder");
  }
  if (cfg.command != Command::symmetric && cfg.shape == DomainShape::cylinder) {
    fail(source, shape->value_loc,
         std::string("the ") + to_string(cfg.command) +
             " command operates on a box domain");
  }
  Entry* edges = doc.get("domain", "edges");
  Entry* radius = doc.get("domain", "radius");
  Entry* height = doc.get("domain", "height");
  if (cfg.shape == DomainShape::box) {
    if (!edges) {
      fail(source, domain->loc,
           "missing mandatory key 'edges' for a box domain");
    }
    if (radius) fail(source, radius->key_loc, "radius applies to cylinder domains");
    if (height) fail(source, height->key_loc, "height applies to cylinder domains");
    auto values = parse_doubles(source, *edges, 3, "edges");
    for (double v : values) {
      if (!(v > 0.0)) {
        fail(source, edges->value_loc, "box edge lengths must be positive");
      }
    }
    cfg.edges = {values[0], values[1], values[2]};
  } else {
    if (edges) fail(source, edges->key_loc, "edges applies to box domains");
    if (!radius || !height) {
      fail(source, domain->loc,
           "cylinder domains need both 'radius' and 'height'");
    }
    cfg.radius = parse_double(source, *radius);
    cfg.height = parse_double(source, *height);
    if (!(cfg.radius > 0.0)) {
      fail(source, radius->value_loc, "cylinder radius must be positive");
    }
    if (!(cfg.height > 0.0)) {
      fail(source, height->value_loc, "cylinder height must be positive");
    }
  }

  // [model]
  const SectionData* model = doc.find("model");
  Entry* lambda = nullptr;
  Entry* eps = nullptr;
  Entry* mu = nullptr;
  Entry* omega = nullptr;
  if (model) {
    Entry* cutoff = doc.get("model", "cutoff");
    Entry* grid = doc.get("model", "grid");
    Entry* nr = doc.get("model", "nr");
    Entry* nz = doc.get("model", "nz");
    if (cfg.shape == DomainShape::box) {
      if (nr) fail(source, nr->key_loc, "nr applies to cylinder meridian grids");
      if (nz) fail(source, nz->key_loc, "nz applies to cylinder meridian grids");
      if (cutoff) {
        cfg.cutoff = parse_double(source, *cutoff);
        if (!(cfg.cutoff > 0.0)) {
          fail(source, cutoff->value_loc, "the spectral cutoff must be positive");
        }
      }
      if (grid) {
        auto tokens = tokenize(*grid);
        if (tokens.size() != 3) {
          fail(source, grid->value_loc,
               "grid takes exactly 3 per-axis resolutions");
        }
        for (int axis = 0; axis < 3; ++axis) {
          long n = parse_int_token(source, tokens[static_cast<std::size_t>(axis)]);
          if (n < 2) {
            fail(source, tokens[static_cast<std::size_t>(axis)].loc,
                 "quadrature resolutions must be at least 2 per axis");
          }
          cfg.grid[static_cast<std::size_t>(axis)] = static_cast<int>(n);
        }
      }
    } else {
      if (cutoff) {
        fail(source, cutoff->key_loc, "cutoff applies to box spectral bases");
      }
      if (grid) {
        fail(source, grid->key_loc, "grid applies to box quadrature; use nr/nz");
      }
      if (nr) {
        long n = parse_int(source, *nr);
        if (n < 2) fail(source, nr->value_loc, "nr must be at least 2");
        cfg.nr = static_cast<int>(n);
      }
      if (nz) {
        long n = parse_int(source, *nz);
        if (n < 2) fail(source, nz->value_loc, "nz must be at least 2");
        cfg.nz = static_cast<int>(n);
      }
    }
    lambda = doc.get("model", "lambda");
    eps = doc.get("model", "eps");
    mu = doc.get("model", "mu");
    omega = doc.get("model", "omega");
    if (eps || mu || omega) {
      if (!eps || !mu || !omega) {
        Entry* present = eps ? eps : (mu ? mu : omega);
        fail(source, present->key_loc,
             "a physics block needs all of eps, mu, and omega");
      }
      PhysicsBlock physics;
      physics.eps = parse_double(source, *eps);
      physics.mu = parse_double(source, *mu);
      physics.omega = parse_double(source, *omega);
      if (!(physics.eps > 0.0)) {
        fail(source, eps->value_loc, "permittivity eps must be positive");
      }
      if (!(physics.mu > 0.0)) {
        fail(source, mu->value_loc, "permeability mu must be positive");
      }
      cfg.physics = physics;
    }
    if (lambda) {
      if (cfg.physics) {
        fail(source, lambda->key_loc,
             "specify either lambda or a physics block (eps, mu, omega), not "
             "both");
      }
      cfg.lambda = parse_double(source, *lambda);
    }
  }
  const bool needs_model = cfg.command == Command::ground ||
                           cfg.command == Command::symmetric ||
                           cfg.command == Command::oracle;
  if (needs_model && !cfg.lambda.has_value() && !cfg.physics.has_value()) {
    fail(source, model ? model->loc : Location{1, 1},
         "missing mandatory key 'lambda' (or a physics block eps/mu/omega) in "
         "[model]");
  }
  if (cfg.command == Command::ground && cfg.lambda.has_value() &&
      *cfg.lambda > 0.0) {
    fail(source, lambda->value_loc,
         "ground-state solves require lambda <= 0; positive lambda lies "
         "outside the supported regime");
  }

  // [nonlinearity]
  if (doc.find("nonlinearity")) {
    Entry* kind = doc.get("nonlinearity", "kind");
    Entry* gamma = doc.get("nonlinearity", "gamma");
    Entry* exponent = doc.get("nonlinearity", "exponent");
    Entry* matrix = doc.get("nonlinearity", "matrix");
    Entry* poly = doc.get("nonlinearity", "poly");
    if (kind) cfg.nonlinearity.kind = parse_kind(source, *kind);
    const auto nl_kind = cfg.nonlinearity.kind;
    if (gamma) {
      if (nl_kind != NonlinearityConfig::Kind::kerr &&
          nl_kind != NonlinearityConfig::Kind::power) {
        fail(source, gamma->key_loc,
             "gamma applies to kerr and power nonlinearities");
      }
      cfg.nonlinearity.gamma = parse_coefficient(source, *gamma);
    }
    if (exponent) {
      if (nl_kind != NonlinearityConfig::Kind::power) {
        fail(source, exponent->key_loc,
             "exponent applies to power nonlinearities");
      }
      cfg.nonlinearity.exponent = parse_double(source, *exponent);
      if (!(cfg.nonlinearity.exponent > 2.0) ||
          !(cfg.nonlinearity.exponent < 6.0)) {
        fail(source, exponent->value_loc,
             "the power exponent must lie strictly between 2 and 6 "
             "(superquadratic and subcritical)");
      }
    }
    if (matrix) {
      if (nl_kind != NonlinearityConfig::Kind::power) {
        fail(source, matrix->key_loc,
             "matrix applies to power nonlinearities");
      }
      auto values = parse_doubles(source, *matrix, 9, "matrix");
      std::array<double, 9> m;
      std::copy(values.begin(), values.end(), m.begin());
      Mat3 check;
      check << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
      if (std::abs(check.determinant()) < 1e-12) {
        fail(source, matrix->value_loc, "the mixing matrix must be invertible");
      }
      cfg.nonlinearity.matrix = m;
    }
    if (poly) {
      if (nl_kind != NonlinearityConfig::Kind::polynomial) {
        fail(source, poly->key_loc,
             "poly applies to polynomial nonlinearities");
      }
      auto values = parse_doubles(source, *poly, 0, "poly");
      if (values.empty() || values.size() % 2 != 0) {
        fail(source, poly->value_loc,
             "poly takes coefficient/exponent pairs");
      }
      for (std::size_t i = 0; i < values.size(); i += 2) {
        if (values[i] == 0.0) {
          fail(source, poly->value_loc,
               "polynomial coefficients must be nonzero");
        }
        if (!(values[i + 1] >= 2.0) || !(values[i + 1] < 6.0)) {
          fail(source, poly->value_loc,
               "polynomial exponents must lie in [2, 6)");
        }
      }
      cfg.nonlinearity.poly = values;
    }
    if (nl_kind == NonlinearityConfig::Kind::polynomial && !poly) {
      fail(source, kind ? kind->key_loc : doc.find("nonlinearity")->loc,
           "polynomial nonlinearities need a 'poly' key with "
           "coefficient/exponent pairs");
    }
    if (nl_kind == NonlinearityConfig::Kind::polynomial &&
        cfg.command != Command::check_nonlinearity) {
      for (std::size_t i = 0; i < cfg.nonlinearity.poly.size(); i += 2) {
        if (cfg.nonlinearity.poly[i] < 0.0 ||
            !(cfg.nonlinearity.poly[i + 1] > 2.0)) {
          fail(source, poly->value_loc,
               "solver commands need strictly positive polynomial "
               "coefficients with exponents in (2, 6); anything else is "
               "screening-only (check-nonlinearity)");
        }
      }
    }
  }
  if (cfg.physics &&
      cfg.nonlinearity.kind != NonlinearityConfig::Kind::kerr) {
    fail(source, eps->key_loc,
         "a physics block defines a Kerr medium; set nonlinearity kind = "
         "kerr");
  }

  // [solver]
  if (doc.find("solver")) {
    if (Entry* e = doc.get("solver", "tol_inner")) {
      cfg.solver.tol_inner = parse_double(source, *e);
      if (!(cfg.solver.tol_inner > 0.0)) {
        fail(source, e->value_loc, "tolerances must be positive");
      }
    }
    if (Entry* e = doc.get("solver", "tol_outer")) {
      cfg.solver.tol_outer = parse_double(source, *e);
      if (!(cfg.solver.tol_outer > 0.0)) {
        fail(source, e->value_loc, "tolerances must be positive");
      }
    }
    if (Entry* e = doc.get("solver", "max_inner_iters")) {
      long n = parse_int(source, *e);
      if (n < 1) fail(source, e->value_loc, "iteration budgets must be at least 1");
      cfg.solver.max_inner_iters = static_cast<int>(n);
    }
    if (Entry* e = doc.get("solver", "max_outer_iters")) {
      long n = parse_int(source, *e);
      if (n < 1) fail(source, e->value_loc, "iteration budgets must be at least 1");
      cfg.solver.max_outer_iters = static_cast<int>(n);
    }
    if (Entry* e = doc.get("solver", "linesearch_shrink")) {
      cfg.solver.linesearch.shrink = parse_double(source, *e);
      if (!(cfg.solver.linesearch.shrink > 0.0) ||
          !(cfg.solver.linesearch.shrink < 1.0)) {
        fail(source, e->value_loc, "linesearch_shrink must lie in (0, 1)");
      }
    }
    if (Entry* e = doc.get("solver", "linesearch_decrease")) {
      cfg.solver.linesearch.sufficient_decrease = parse_double(source, *e);
      if (!(cfg.solver.linesearch.sufficient_decrease > 0.0) ||
          !(cfg.solver.linesearch.sufficient_decrease < 1.0)) {
        fail(source, e->value_loc, "linesearch_decrease must lie in (0, 1)");
      }
    }
    if (Entry* e = doc.get("solver", "restarts")) {
      long n = parse_int(source, *e);
      if (n < 1) fail(source, e->value_loc, "restarts must be at least 1");
      cfg.solver.restarts = static_cast<int>(n);
    }
  }

  // [output]
  if (doc.find("output")) {
    if (Entry* e = doc.get("output", "dir")) {
      cfg.out_dir = e->value;
    }
  }

  doc.reject_unused();
  cfg.solver.seed = cfg.seed;
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

namespace {

void serialize_coefficient(std::ostream& out, const CoefficientConfig& c) {
  switch (c.kind) {
    case CoefficientConfig::Kind::constant:
      out << "constant " << format_double(c.value);
      return;
    case CoefficientConfig::Kind::step:
      out << "step " << c.axis << " " << format_double(c.threshold) << " "
          << format_double(c.low) << " " << format_double(c.high);
      return;
    case CoefficientConfig::Kind::bump:
      out << "bump " << format_double(c.baseline) << " "
          << format_double(c.amplitude) << " " << format_double(c.center[0])
          << " " << format_double(c.center[1]) << " "
          << format_double(c.center[2]) << " " << format_double(c.width);
      return;
  }
}

}  // namespace

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  out << "[run]\n";
  out << "command = " << to_string(config.command) << "\n";
  out << "seed = " << config.seed << "\n";
  out << "\n[domain]\n";
  out << "shape = " << to_string(config.shape) << "\n";
  if (config.shape == DomainShape::box) {
    out << "edges = " << format_double(config.edges[0]) << " "
        << format_double(config.edges[1]) << " "
        << format_double(config.edges[2]) << "\n";
  } else {
    out << "radius = " << format_double(config.radius) << "\n";
    out << "height = " << format_double(config.height) << "\n";
  }
  out << "\n[model]\n";
  if (config.shape == DomainShape::box) {
    out << "cutoff = " << format_double(config.cutoff) << "\n";
    if (config.grid != std::array<int, 3>{0, 0, 0}) {
      out << "grid = " << config.grid[0] << " " << config.grid[1] << " "
          << config.grid[2] << "\n";
    }
  } else {
    out << "nr = " << config.nr << "\n";
    out << "nz = " << config.nz << "\n";
  }
  if (config.lambda) {
    out << "lambda = " << format_double(*config.lambda) << "\n";
  }
  if (config.physics) {
    out << "eps = " << format_double(config.physics->eps) << "\n";
    out << "mu = " << format_double(config.physics->mu) << "\n";
    out << "omega = " << format_double(config.physics->omega) << "\n";
  }
  out << "\n[nonlinearity]\n";
  switch (config.nonlinearity.kind) {
    case NonlinearityConfig::Kind::kerr:
      out << "kind = kerr\n";
      out << "gamma = ";
      serialize_coefficient(out, config.nonlinearity.gamma);
      out << "\n";
      break;
    case NonlinearityConfig::Kind::power:
      out << "kind = power\n";
      out << "gamma = ";
      serialize_coefficient(out, config.nonlinearity.gamma);
      out << "\n";
      out << "exponent = " << format_double(config.nonlinearity.exponent)
          << "\n";
      if (config.nonlinearity.matrix) {
        out << "matrix =";
        for (double v : *config.nonlinearity.matrix) {
          out << " " << format_double(v);
        }
        out << "\n";
      }
      break;
    case NonlinearityConfig::Kind::polynomial:
      out << "kind = polynomial\n";
      out << "poly =";
      for (double v : config.nonlinearity.poly) {
        out << " " << format_double(v);
      }
      out << "\n";
      break;
    case NonlinearityConfig::Kind::zero:
      out << "kind = zero\n";
      break;
  }
  out << "\n[solver]\n";
  out << "tol_inner = " << format_double(config.solver.tol_inner) << "\n";
  out << "tol_outer = " << format_double(config.solver.tol_outer) << "\n";
  out << "max_inner_iters = " << config.solver.max_inner_iters << "\n";
  out << "max_outer_iters = " << config.solver.max_outer_iters << "\n";
  out << "linesearch_shrink = "
      << format_double(config.solver.linesearch.shrink) << "\n";
  out << "linesearch_decrease = "
      << format_double(config.solver.linesearch.sufficient_decrease) << "\n";
  out << "restarts = " << config.solver.restarts << "\n";
  out << "\n[output]\n";
  out << "dir = " << config.out_dir << "\n";
  return out.str();
}

}  // namespace curlgs
