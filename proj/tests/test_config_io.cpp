#include "curlgs/config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "curlgs/errors.hpp"
#include "curlgs/io.hpp"
#include "curlgs/run.hpp"
#include "curlgs/transforms.hpp"

using namespace curlgs;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string box_header(const char* command) {
  std::ostringstream out;
  out << "[run]\ncommand = " << command << "\n\n[domain]\nshape = box\n"
      << "edges = 3.141592653589793 3.141592653589793 3.141592653589793\n";
  return out.str();
}

// Expects parse_config to throw and returns the diagnostic text.
std::string parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& error) {
    return error.what();
  }
  ADD_FAILURE() << "config was accepted:\n" << text;
  return {};
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in) << "missing artifact " << path;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST(ParseConfig, MinimalGroundConfigFillsDefaults) {
  const RunConfig cfg = parse_config(box_header("ground") +
                                     "\n[model]\ncutoff = 2.5\nlambda = 0\n");
  EXPECT_EQ(cfg.command, Command::ground);
  EXPECT_EQ(cfg.shape, DomainShape::box);
  EXPECT_DOUBLE_EQ(cfg.cutoff, 2.5);
  ASSERT_TRUE(cfg.lambda.has_value());
  EXPECT_DOUBLE_EQ(*cfg.lambda, 0.0);
  EXPECT_FALSE(cfg.physics.has_value());
  // Defaults everywhere else.
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.nonlinearity.kind, NonlinearityConfig::Kind::kerr);
  EXPECT_EQ(cfg.nonlinearity.gamma.kind, CoefficientConfig::Kind::constant);
  EXPECT_DOUBLE_EQ(cfg.nonlinearity.gamma.value, 1.0);
  EXPECT_EQ(cfg.solver, SolverConfig{});
  EXPECT_EQ(cfg.out_dir, ".");
  // The echo spells out every effective value.
  const std::string echo = serialize_config(cfg);
  EXPECT_NE(echo.find("command = ground"), std::string::npos);
  EXPECT_NE(echo.find("lambda = 0"), std::string::npos);
  EXPECT_NE(echo.find("kind = kerr"), std::string::npos);
  EXPECT_NE(echo.find("tol_outer = 1e-07"), std::string::npos);
  EXPECT_NE(echo.find("restarts = 4"), std::string::npos);
}

TEST(ParseConfig, RejectsPositiveLambdaForGround) {
  const std::string text =
      box_header("ground") + "\n[model]\ncutoff = 2.5\nlambda = 0.5\n";
  const std::string message = parse_error(text);
  EXPECT_NE(message.find("lambda <= 0"), std::string::npos) << message;
  // lambda = 0.5 sits on line 10; the diagnostic points at the value.
  EXPECT_NE(message.find("config:10:10"), std::string::npos) << message;
}

TEST(ParseConfig, PhysicsBlockComputesLambda) {
  const RunConfig cfg = parse_config(
      box_header("ground") +
      "\n[model]\ncutoff = 2.5\neps = 1\nmu = 1\nomega = 1\n");
  ASSERT_TRUE(cfg.physics.has_value());
  EXPECT_FALSE(cfg.lambda.has_value());
  const ResolvedModel model = resolve_model(cfg);
  EXPECT_DOUBLE_EQ(model.lambda, -1.0);
  EXPECT_FALSE(model.spec.degenerate());
  // The derived quartic carries gamma = mu omega^2 alpha = 1.
  EXPECT_DOUBLE_EQ(model.spec.F(Vec3(1.0, 1.0, 1.0), Vec3(2.0, 0.0, 0.0)),
                   4.0);
  const std::string echo = serialize_config(cfg);
  EXPECT_NE(echo.find("omega = 1"), std::string::npos);
  EXPECT_EQ(echo.find("lambda"), std::string::npos);
}

TEST(ParseConfig, UnknownKeysAreHardErrorsWithLocation) {
  const std::string message = parse_error(
      box_header("eigs") + "\n[model]\ncutof = 6.5\n");
  EXPECT_NE(message.find("unknown key 'cutof'"), std::string::npos) << message;
  EXPECT_NE(message.find("config:9:1"), std::string::npos) << message;

  const std::string section_message =
      parse_error("[run]\ncommand = eigs\n\n[domian]\nshape = box\n");
  EXPECT_NE(section_message.find("unknown section [domian]"),
            std::string::npos)
      << section_message;
  EXPECT_NE(section_message.find("config:4:1"), std::string::npos)
      << section_message;
}

TEST(ParseConfig, RejectsStructuralMistakes) {
  // Duplicate key.
  EXPECT_NE(parse_error(box_header("eigs") + "shape = box\n")
                .find("duplicate key 'shape'"),
            std::string::npos);
  // Duplicate section.
  EXPECT_NE(parse_error(box_header("eigs") + "\n[domain]\nshape = box\n")
                .find("duplicate section [domain]"),
            std::string::npos);
  // Key before any section.
  EXPECT_NE(parse_error("command = eigs\n").find("outside of a section"),
            std::string::npos);
  // Missing '='.
  EXPECT_NE(parse_error("[run]\ncommand eigs\n").find("expected 'key = value'"),
            std::string::npos);
  // Missing value.
  EXPECT_NE(parse_error("[run]\ncommand =\n").find("missing value"),
            std::string::npos);
  // Unterminated header.
  EXPECT_NE(parse_error("[run\ncommand = eigs\n").find("unterminated"),
            std::string::npos);
  // Missing mandatory sections and keys.
  EXPECT_NE(parse_error("").find("missing [run] section"), std::string::npos);
  EXPECT_NE(parse_error("[run]\ncommand = eigs\n").find("missing [domain]"),
            std::string::npos);
  EXPECT_NE(parse_error("[run]\nseed = 1\n[domain]\nshape = box\nedges = 1 1 1\n")
                .find("missing mandatory key 'command'"),
            std::string::npos);
}

TEST(ParseConfig, RejectsDomainAndCommandMismatches) {
  // Cylinder keys on a box and vice versa.
  EXPECT_NE(parse_error(box_header("eigs") + "radius = 1\n")
                .find("radius applies to cylinder domains"),
            std::string::npos);
  EXPECT_NE(
      parse_error("[run]\ncommand = symmetric\n\n[domain]\nshape = "
                  "cylinder\nradius = 1\nheight = 1\nedges = 1 1 1\n")
          .find("edges applies to box domains"),
      std::string::npos);
  // Shape must match the command.
  EXPECT_NE(parse_error("[run]\ncommand = ground\n\n[domain]\nshape = "
                        "cylinder\nradius = 1\nheight = 1\n")
                .find("operates on a box domain"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("symmetric"))
                .find("set shape = cylinder"),
            std::string::npos);
  // Cylinder model keys on a box model.
  EXPECT_NE(parse_error(box_header("eigs") + "\n[model]\nnr = 8\n")
                .find("nr applies to cylinder meridian grids"),
            std::string::npos);
  // Solver commands need lambda or physics.
  EXPECT_NE(parse_error(box_header("ground") + "\n[model]\ncutoff = 2.5\n")
                .find("missing mandatory key 'lambda'"),
            std::string::npos);
  // Half a physics block is an error, as is mixing it with lambda.
  EXPECT_NE(parse_error(box_header("ground") +
                        "\n[model]\ncutoff = 2.5\neps = 1\nmu = 1\n")
                .find("all of eps, mu, and omega"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("ground") +
                        "\n[model]\nlambda = 0\neps = 1\nmu = 1\nomega = 1\n")
                .find("not both"),
            std::string::npos);
}

TEST(ParseConfig, RejectsOutOfRangeNumbers) {
  // Supercritical and merely-quadratic power exponents.
  for (const char* exponent : {"6", "2", "1.5", "7"}) {
    const std::string message = parse_error(
        box_header("ground") + "\n[model]\ncutoff = 2.5\nlambda = 0\n" +
        "\n[nonlinearity]\nkind = power\nexponent = " + exponent + "\n");
    EXPECT_NE(message.find("strictly between 2 and 6"), std::string::npos)
        << message;
  }
  EXPECT_NE(parse_error(box_header("eigs") + "\n[model]\ncutoff = -1\n")
                .find("must be positive"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("eigs") + "\n[solver]\nrestarts = 0\n")
                .find("at least 1"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("eigs") + "\n[solver]\ntol_outer = 0\n")
                .find("must be positive"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("eigs") + "\n[model]\ngrid = 4 4 1\n")
                .find("at least 2"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("eigs") + "\n[model]\ncutoff = abc\n")
                .find("expected a finite number"),
            std::string::npos);
  EXPECT_NE(parse_error("[run]\ncommand = eigs\nseed = -3\n\n[domain]\n"
                        "shape = box\nedges = 1 1 1\n")
                .find("seed must be a nonnegative"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("eigs") + "\n[domain2]\n")
                .find("unknown section"),
            std::string::npos);
  // Coefficient fields must stay positive.
  EXPECT_NE(parse_error(box_header("ground") +
                        "\n[model]\ncutoff = 2.5\nlambda = 0\n"
                        "\n[nonlinearity]\nkind = kerr\ngamma = constant 0\n")
                .find("must be positive"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("ground") +
                        "\n[model]\ncutoff = 2.5\nlambda = 0\n"
                        "\n[nonlinearity]\nkind = kerr\ngamma = bump 1 -1.5 "
                        "0 0 0 0.5\n")
                .find("lower bound"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("check-nonlinearity") +
                        "\n[nonlinearity]\nkind = polynomial\npoly = 1 3 2\n")
                .find("coefficient/exponent pairs"),
            std::string::npos);
  EXPECT_NE(parse_error(box_header("check-nonlinearity") +
                        "\n[nonlinearity]\nkind = polynomial\npoly = 1 6\n")
                .find("[2, 6)"),
            std::string::npos);
}

TEST(ParseConfig, ScreeningOnlyPolynomialsAreRejectedForSolvers) {
  // Negative coefficients and p = 2 are fine for screening...
  const RunConfig screened = parse_config(
      box_header("check-nonlinearity") +
      "\n[nonlinearity]\nkind = polynomial\npoly = 0.25 4 -1 3\n");
  EXPECT_EQ(screened.nonlinearity.poly.size(), 4u);
  EXPECT_THROW(build_nonlinearity(screened.nonlinearity), ConfigError);
  // ...but not for a solve.
  EXPECT_NE(parse_error(box_header("ground") +
                        "\n[model]\ncutoff = 2.5\nlambda = 0\n"
                        "\n[nonlinearity]\nkind = polynomial\npoly = -1 3\n")
                .find("screening-only"),
            std::string::npos);
  // All-positive superquadratic polynomials build a certified spec.
  const RunConfig solvable = parse_config(
      box_header("ground") + "\n[model]\ncutoff = 2.5\nlambda = 0\n"
      "\n[nonlinearity]\nkind = polynomial\npoly = 0.25 4 0.5 3\n");
  const NonlinearitySpec spec = build_nonlinearity(solvable.nonlinearity);
  EXPECT_TRUE(spec.certified());
  const Vec3 u(1.0, 1.0, 0.0);
  const double s = u.norm();
  EXPECT_NEAR(spec.F(Vec3::Zero(), u),
              0.25 * s * s * s * s + 0.5 * s * s * s, 1e-12);
}

TEST(ParseConfig, RoundTripsThroughSerialization) {
  std::vector<std::string> texts;
  texts.push_back(box_header("ground") +
                  "\n[model]\ncutoff = 3.5\nlambda = -2.5\ngrid = 12 14 16\n"
                  "\n[nonlinearity]\nkind = power\ngamma = step 1 1.5 0.5 "
                  "2\nexponent = 3.5\nmatrix = 2 0 0 0 1 0 0 0 1\n"
                  "\n[solver]\ntol_inner = 1e-11\ntol_outer = 1e-08\n"
                  "max_inner_iters = 500\nmax_outer_iters = 300\n"
                  "linesearch_shrink = 0.4\nlinesearch_decrease = 0.001\n"
                  "restarts = 2\n\n[output]\ndir = runs/a\n");
  texts.push_back(
      "[run]\ncommand = symmetric\nseed = 99\n\n[domain]\nshape = cylinder\n"
      "radius = 1.25\nheight = 2.5\n\n[model]\nnr = 12\nnz = 10\n"
      "lambda = -0.5\n\n[nonlinearity]\nkind = kerr\ngamma = bump 1 0.5 0 0 "
      "1.25 0.4\n");
  texts.push_back(box_header("check-nonlinearity") +
                  "\n[nonlinearity]\nkind = polynomial\npoly = 0.5 2\n");
  texts.push_back(box_header("oracle") +
                  "\n[model]\ncutoff = 2.5\neps = 2\nmu = 0.5\nomega = 3\n");
  texts.push_back(box_header("check-nonlinearity") +
                  "\n[nonlinearity]\nkind = zero\n");
  for (const std::string& text : texts) {
    const RunConfig first = parse_config(text);
    const std::string canonical = serialize_config(first);
    const RunConfig second = parse_config(canonical);
    EXPECT_EQ(first, second) << canonical;
    // The canonical form is a fixed point.
    EXPECT_EQ(canonical, serialize_config(second));
  }
}

TEST(FormatDouble, ShortestRoundTripAndHexTwins) {
  const double values[] = {0.0,    -0.0,   1.0,        kPi,     1e-10,
                           0.1,    -2.5e3, 1.0 / 3.0,  4e300,   5e-324,
                           -kPi,   13.778765,  0.49999999999999994};
  for (double v : values) {
    const std::string decimal = format_double(v);
    // strtod, not stod: stod raises out_of_range on subnormals.
    EXPECT_EQ(std::strtod(decimal.c_str(), nullptr), v) << decimal;
    const std::string hex = format_double_hex(v);
    EXPECT_EQ(std::strtod(hex.c_str(), nullptr), v) << hex;
  }
  // Shortest: plain values do not sprout digits.
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(SpectrumCsv, ReproducesTheModeCounting) {
  const ModeBasis basis =
      enumerate_modes(BoxDomain(kPi, kPi, kPi), 6.5);
  const std::string csv = spectrum_csv(basis);
  std::istringstream lines(csv);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line, "index,k1,k2,k3,kind,polarization,eigenvalue");
  std::map<std::pair<std::string, int>, int> multiset;
  int rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> row;
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    ASSERT_EQ(row.size(), 7u) << line;
    EXPECT_EQ(std::stoi(row[0]), rows);
    multiset[{row[4], static_cast<int>(std::lround(std::stod(row[6])))}]++;
    ++rows;
  }
  // Counting oracle on the pi-cube: divfree 2(x3), 3(x2), 5(x6), 6(x6);
  // gradient (Dirichlet) 3(x1), 6(x3).
  EXPECT_EQ(rows, 21);
  EXPECT_EQ((multiset[{"divfree", 2}]), 3);
  EXPECT_EQ((multiset[{"divfree", 3}]), 2);
  EXPECT_EQ((multiset[{"divfree", 5}]), 6);
  EXPECT_EQ((multiset[{"divfree", 6}]), 6);
  EXPECT_EQ((multiset[{"gradient", 3}]), 1);
  EXPECT_EQ((multiset[{"gradient", 6}]), 3);
}

TEST(VtkWriter, EmitsAStructuredPointsRaster) {
  const BoxDomain box(1.0, 2.0, 3.0);
  const GridSpec raster = GridSpec::uniform_vertex(box, {3, 4, 5});
  GridField field = GridField::zero(raster);
  for (Eigen::Index i = 0; i < field.values.cols(); ++i) {
    field.values(0, i) = static_cast<double>(i);
  }
  const std::string vtk = vtk_structured_points(field, "E");
  std::istringstream lines(vtk);
  std::string line;
  std::vector<std::string> header;
  for (int i = 0; i < 8 && std::getline(lines, line); ++i) header.push_back(line);
  ASSERT_EQ(header.size(), 8u);
  EXPECT_EQ(header[0], "# vtk DataFile Version 3.0");
  EXPECT_EQ(header[2], "ASCII");
  EXPECT_EQ(header[3], "DATASET STRUCTURED_POINTS");
  EXPECT_EQ(header[4], "DIMENSIONS 3 4 5");
  EXPECT_EQ(header[5], "ORIGIN 0 0 0");
  EXPECT_EQ(header[6], "SPACING 0.5 0.6666666666666666 0.75");
  EXPECT_EQ(header[7], "POINT_DATA 60");
  ASSERT_TRUE(std::getline(lines, line));
  EXPECT_EQ(line, "VECTORS E double");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 60);
  // Gauss grids are not rasters.
  const GridSpec gauss = GridSpec::gauss(box, {4, 4, 4});
  EXPECT_THROW(vtk_structured_points(GridField::zero(gauss), "E"),
               StructuralError);
}

TEST(Run, GroundSingleModeMatchesTheClosedForm) {
  // On (0,pi)^2 x (0,1) the cutoff 2.5 keeps exactly the k = (1,1,0) mode
  // E = N (0,0, sin x1 sin x2); for lambda = 0 and the unit quartic the
  // constrained minimum is 4 pi^2 H / 9 with H = 1.
  const auto dir = fresh_dir("run_ground");
  RunConfig cfg = parse_config(
      "[run]\ncommand = ground\nseed = 3\n\n[domain]\nshape = box\n"
      "edges = 3.141592653589793 3.141592653589793 1\n\n[model]\n"
      "cutoff = 2.5\nlambda = 0\n");
  cfg.out_dir = dir.string();
  const RunResult result = run(cfg);
  EXPECT_EQ(result.exit_code, 0) << result.message;
  const json report = json::parse(slurp(dir / "report.json"));
  const double expected = 4.0 * kPi * kPi / 9.0;
  EXPECT_NEAR(report["c0"].get<double>(), expected, 1e-6 * expected);
  EXPECT_GE(report["converged_restarts"].get<int>(), 1);
  // Hex twins decode to the exact double.
  EXPECT_EQ(std::strtod(report["c0_hex"].get<std::string>().c_str(), nullptr),
            report["c0"].get<double>());
  // Artifacts: report, field raster, manifest.
  EXPECT_TRUE(std::filesystem::exists(dir / "field.vtk"));
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["errors"].size(), 0u);
  EXPECT_EQ(manifest["version"].get<std::string>(), tool_version());
  const ModeBasis basis =
      enumerate_modes(BoxDomain(kPi, kPi, 1.0), 2.5);
  char expected_fp[32];
  std::snprintf(expected_fp, sizeof(expected_fp), "0x%016llx",
                static_cast<unsigned long long>(basis.fingerprint()));
  EXPECT_EQ(manifest["basis_fingerprint"].get<std::string>(), expected_fp);
  // The echoed config parses back to the effective one.
  EXPECT_EQ(parse_config(manifest["config"].get<std::string>()), cfg);
}

TEST(Run, EigsEmitsSpectrumCsv) {
  const auto dir = fresh_dir("run_eigs");
  RunConfig cfg = parse_config(box_header("eigs") + "\n[model]\ncutoff = 6.5\n");
  cfg.out_dir = dir.string();
  const RunResult result = run(cfg);
  EXPECT_EQ(result.exit_code, 0) << result.message;
  const std::string csv = slurp(dir / "spectrum.csv");
  EXPECT_EQ(csv, spectrum_csv(enumerate_modes(BoxDomain(kPi, kPi, kPi), 6.5)));
}

TEST(Run, SymmetricEmitsSectorTableProfileAndLift) {
  const auto dir = fresh_dir("run_symmetric");
  RunConfig cfg = parse_config(
      "[run]\ncommand = symmetric\nseed = 5\n\n[domain]\nshape = cylinder\n"
      "radius = 3.141592653589793\nheight = 3.141592653589793\n\n[model]\n"
      "nr = 8\nnz = 8\nlambda = 0\n\n[solver]\nrestarts = 2\n");
  cfg.out_dir = dir.string();
  const RunResult result = run(cfg);
  EXPECT_EQ(result.exit_code, 0) << result.message;
  const json table = json::parse(slurp(dir / "sectors.json"));
  ASSERT_EQ(table["sectors"].size(), 3u);
  std::map<std::string, json> rows;
  for (const json& row : table["sectors"]) {
    rows[row["sector"].get<std::string>()] = row;
  }
  for (const char* sector : {"all", "even_z", "odd_z"}) {
    ASSERT_TRUE(rows.count(sector));
    EXPECT_EQ(rows[sector]["status"], "converged") << sector;
  }
  // Sector nesting: the unconstrained value is the smallest.
  const double c_all = rows["all"]["value"].get<double>();
  EXPECT_LE(c_all, rows["even_z"]["value"].get<double>() + 1e-9);
  EXPECT_LE(c_all, rows["odd_z"]["value"].get<double>() + 1e-9);
  EXPECT_TRUE(table["ground_sector"] == "all" ||
              table["ground_sector"] == "even_z");
  // Profile rows cover every meridian unknown.
  const std::string profile = slurp(dir / "profile.csv");
  EXPECT_EQ(std::count(profile.begin(), profile.end(), '\n'),
            8 * 7 + 1);  // nr * (nz - 1) rows plus header
  EXPECT_TRUE(std::filesystem::exists(dir / "lifted.vtk"));
}

TEST(Run, CheckNonlinearityScreensThePlantedViolator) {
  const auto dir = fresh_dir("run_check");
  RunConfig cfg = parse_config(
      box_header("check-nonlinearity") +
      "\n[nonlinearity]\nkind = polynomial\npoly = 0.5 2\n");
  cfg.out_dir = dir.string();
  const RunResult result = run(cfg);
  // Screening that finds violations is still a successful screen.
  EXPECT_EQ(result.exit_code, 0) << result.message;
  const json report = json::parse(slurp(dir / "conditions.json"));
  EXPECT_FALSE(report["all_hold"].get<bool>());
  bool found = false;
  for (const json& finding : report["findings"]) {
    if (finding["condition"] == "F4" && finding["status"] == "violated") {
      found = true;
      ASSERT_FALSE(finding["witness"].is_null());
      EXPECT_GE(finding["witness"]["margin"].get<double>(), 1e-9);
    }
  }
  EXPECT_TRUE(found) << report.dump(2);
}

TEST(Run, RefusalsExitTwoAndLandInTheManifest) {
  // Dense oracle beyond 12 coefficients.
  {
    const auto dir = fresh_dir("run_refusal_oracle");
    RunConfig cfg = parse_config(box_header("oracle") +
                                 "\n[model]\ncutoff = 6.5\nlambda = 0\n");
    cfg.out_dir = dir.string();
    const RunResult result = run(cfg);
    EXPECT_EQ(result.exit_code, 2);
    EXPECT_NE(result.message.find("12"), std::string::npos);
    const json manifest = json::parse(slurp(dir / "manifest.json"));
    ASSERT_EQ(manifest["errors"].size(), 1u);
    EXPECT_EQ(manifest["errors"][0].get<std::string>(), result.message);
  }
  // Degenerate (zero) nonlinearity cannot be solved.
  {
    const auto dir = fresh_dir("run_refusal_zero");
    RunConfig cfg = parse_config(box_header("ground") +
                                 "\n[model]\ncutoff = 2.5\nlambda = 0\n"
                                 "\n[nonlinearity]\nkind = zero\n");
    cfg.out_dir = dir.string();
    EXPECT_EQ(run(cfg).exit_code, 2);
  }
  // Anisotropic response on a cylinder violates the radial-symmetry premise.
  {
    const auto dir = fresh_dir("run_refusal_radial");
    RunConfig cfg = parse_config(
        "[run]\ncommand = symmetric\n\n[domain]\nshape = cylinder\n"
        "radius = 1\nheight = 2\n\n[model]\nnr = 6\nnz = 6\nlambda = 0\n"
        "\n[nonlinearity]\nkind = power\ngamma = constant 1\nexponent = 4\n"
        "matrix = 2 0 0 0 1 0 0 0 1\n");
    cfg.out_dir = dir.string();
    const RunResult result = run(cfg);
    EXPECT_EQ(result.exit_code, 2);
    EXPECT_NE(result.message.find("radial"), std::string::npos)
        << result.message;
  }
  // A quadratic form taken below its reduced spectrum.
  {
    const auto dir = fresh_dir("run_refusal_indefinite");
    RunConfig cfg = parse_config(
        "[run]\ncommand = symmetric\n\n[domain]\nshape = cylinder\n"
        "radius = 1\nheight = 1\n\n[model]\nnr = 6\nnz = 6\n"
        "lambda = -1000\n");
    cfg.out_dir = dir.string();
    const RunResult result = run(cfg);
    EXPECT_EQ(result.exit_code, 2);
    EXPECT_NE(result.message.find("below reduced spectrum"),
              std::string::npos)
        << result.message;
  }
}

TEST(Run, SameSeedGivesByteIdenticalArtifacts) {
  RunConfig cfg = parse_config(
      "[run]\ncommand = ground\nseed = 17\n\n[domain]\nshape = box\n"
      "edges = 3.141592653589793 3.141592653589793 1\n\n[model]\n"
      "cutoff = 2.5\nlambda = -0.5\n\n[solver]\nrestarts = 2\n");
  const auto dir_a = fresh_dir("run_det_a");
  const auto dir_b = fresh_dir("run_det_b");
  cfg.out_dir = dir_a.string();
  ASSERT_EQ(run(cfg).exit_code, 0);
  cfg.out_dir = dir_b.string();
  ASSERT_EQ(run(cfg).exit_code, 0);
  // Reports and rasters are byte-identical; the manifest is exempt (it
  // carries wall-clock timings) but its config echo differs only in dir.
  EXPECT_EQ(slurp(dir_a / "report.json"), slurp(dir_b / "report.json"));
  EXPECT_EQ(slurp(dir_a / "field.vtk"), slurp(dir_b / "field.vtk"));
}

TEST(Run, ConfigFileRoundTripsFromDisk) {
  const auto dir = fresh_dir("run_file");
  const std::filesystem::path path = dir / "job.ini";
  {
    std::ofstream out(path);
    out << box_header("eigs") << "\n[model]\ncutoff = 3.5\n";
  }
  const RunConfig cfg = load_config_file(path.string());
  EXPECT_EQ(cfg.command, Command::eigs);
  EXPECT_DOUBLE_EQ(cfg.cutoff, 3.5);
  EXPECT_THROW(load_config_file((dir / "absent.ini").string()), ConfigError);
  // Diagnostics carry the file path as the source.
  {
    std::ofstream out(path);
    out << "[run]\ncommand = fly\n";
  }
  try {
    load_config_file(path.string());
    FAIL() << "bad command accepted";
  } catch (const ConfigError& error) {
    EXPECT_NE(std::string(error.what()).find(path.string()),
              std::string::npos)
        << error.what();
  }
}
