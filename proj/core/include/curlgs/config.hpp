// Run configuration: the documented key-value grammar, its parser with
// line/column diagnostics, validation, and the canonical serialization used
// for config echoes. The grammar is flat INI-style sections ([run], [domain],
// [model], [nonlinearity], [solver], [output]) holding `key = value` lines;
// unknown sections or keys are hard errors, as are duplicates.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curlgs/coefficient_field.hpp"
#include "curlgs/nehari.hpp"
#include "curlgs/nonlinearity.hpp"

namespace curlgs {

enum class Command { eigs, ground, symmetric, check_nonlinearity, oracle };
enum class DomainShape { box, cylinder };

const char* to_string(Command command);
const char* to_string(DomainShape shape);

// Value-semantic description of a scalar coefficient field, limited to the
// shapes the config grammar can spell (sample tables stay API-only).
struct CoefficientConfig {
  enum class Kind { constant, step, bump };

  Kind kind = Kind::constant;
  double value = 1.0;  // constant
  int axis = 0;        // step: jump across {x[axis] = threshold}
  double threshold = 0.0;
  double low = 1.0;
  double high = 1.0;
  double baseline = 1.0;  // bump: baseline + amplitude * gaussian(width)
  double amplitude = 0.0;
  double width = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};

  bool operator==(const CoefficientConfig&) const = default;

  CoefficientField build() const;
};

struct NonlinearityConfig {
  // kerr: quartic gamma(x)/4 |u|^4. power: single gamma(x)/p |M u|^p term.
  // polynomial: sum of c_i |u|^{p_i} terms given as flat (c, p) pairs; with
  // positive coefficients it builds a certified spec, otherwise it can only
  // be screened by check-nonlinearity. zero: no nonlinear response.
  enum class Kind { kerr, power, polynomial, zero };

  Kind kind = Kind::kerr;
  CoefficientConfig gamma{};
  double exponent = 4.0;
  std::optional<std::array<double, 9>> matrix;  // row-major mixing matrix
  std::vector<double> poly;

  bool operator==(const NonlinearityConfig&) const = default;
};

// Time-harmonic Kerr medium parameters; routed through kerr_from_physics,
// which derives lambda = -mu omega^2 eps and the quartic response.
struct PhysicsBlock {
  double eps = 1.0;
  double mu = 1.0;
  double omega = 1.0;

  bool operator==(const PhysicsBlock&) const = default;
};

struct RunConfig {
  Command command = Command::eigs;
  std::uint64_t seed = 1;

  DomainShape shape = DomainShape::box;
  std::array<double, 3> edges{0.0, 0.0, 0.0};  // box
  double radius = 0.0;                          // cylinder
  double height = 0.0;

  double cutoff = 6.5;                // box spectral cutoff
  std::array<int, 3> grid{0, 0, 0};  // box quadrature override; 0 = automatic
  int nr = 16;                        // cylinder meridian resolution
  int nz = 16;

  // Exactly one of lambda / physics for commands that solve; physics implies
  // a kerr nonlinearity and computes lambda = -mu omega^2 eps.
  std::optional<double> lambda;
  std::optional<PhysicsBlock> physics;

  NonlinearityConfig nonlinearity{};
  SolverConfig solver{};  // solver.seed mirrors the [run] seed
  std::string out_dir = ".";

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates the documented grammar. Every rejection throws
// ConfigError with a "<source>:line:col:" prefix pointing at the offending
// key or value; cross-field rules point at the key that triggered them.
RunConfig parse_config(std::string_view text, std::string_view source = "config");

// Reads the file and parses it; diagnostics carry the path as the source.
RunConfig load_config_file(const std::string& path);

// Canonical echo: every effective field in fixed section order, floats in
// shortest round-trip decimal. parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace curlgs
