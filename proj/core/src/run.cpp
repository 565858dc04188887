#include "curlgs/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "curlgs/axisym.hpp"
#include "curlgs/conditions.hpp"
#include "curlgs/energy.hpp"
#include "curlgs/errors.hpp"
#include "curlgs/io.hpp"
#include "curlgs/nehari.hpp"
#include "curlgs/transforms.hpp"

namespace curlgs {
namespace {

namespace fs = std::filesystem;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void write_artifact(const fs::path& dir, const std::string& name,
                    const std::string& content, RunResult& result) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot open " + path.string() + " for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw ConfigError("write failed for " + path.string());
  }
  result.artifacts.push_back(path.string());
}

// Export raster for 3D fields; fine enough to plot every mode the desk-scale
// cutoffs admit without inflating artifact size.
constexpr std::array<int, 3> kExportResolution{33, 33, 33};

bool screening_only(const NonlinearityConfig& config) {
  if (config.kind != NonlinearityConfig::Kind::polynomial) return false;
  for (std::size_t i = 0; i + 1 < config.poly.size(); i += 2) {
    if (config.poly[i] < 0.0 || !(config.poly[i + 1] > 2.0)) return true;
  }
  return false;
}

// Radial polynomial as a black box for the condition checker: the screening
// path for responses outside the certified power family.
BlackBoxF polynomial_black_box(const std::vector<double>& pairs) {
  BlackBoxF out;
  out.F = [pairs](const Vec3&, const Vec3& u) {
    const double s = u.norm();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
      acc += pairs[i] * std::pow(s, pairs[i + 1]);
    }
    return acc;
  };
  out.f = [pairs](const Vec3&, const Vec3& u) -> Vec3 {
    const double s = u.norm();
    if (s == 0.0) return Vec3::Zero();
    double slope = 0.0;
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
      slope += pairs[i] * pairs[i + 1] * std::pow(s, pairs[i + 1] - 2.0);
    }
    return slope * u;
  };
  out.p_hint = 2.0;
  for (std::size_t i = 1; i < pairs.size(); i += 2) {
    out.p_hint = std::max(out.p_hint, pairs[i]);
  }
  return out;
}

BoxDomain box_domain(const RunConfig& config) {
  return BoxDomain(config.edges[0], config.edges[1], config.edges[2]);
}

std::optional<GridSpec> grid_override(const RunConfig& config,
                                      const BoxDomain& box) {
  if (config.grid == std::array<int, 3>{0, 0, 0}) return std::nullopt;
  return GridSpec::gauss(box, config.grid);
}

void run_eigs(const RunConfig& config, const fs::path& dir,
              RunManifest& manifest, RunResult& result) {
  Stopwatch watch;
  const ModeBasis basis = enumerate_modes(box_domain(config), config.cutoff);
  manifest.basis_fingerprint = basis.fingerprint();
  manifest.stages.push_back({"enumerate-modes", watch.seconds()});
  Stopwatch emit;
  write_artifact(dir, "spectrum.csv", spectrum_csv(basis), result);
  manifest.stages.push_back({"emit", emit.seconds()});
}

void run_ground(const RunConfig& config, const fs::path& dir,
                RunManifest& manifest, RunResult& result) {
  Stopwatch enumerate;
  const BoxDomain box = box_domain(config);
  ModeBasis basis = enumerate_modes(box, config.cutoff);
  manifest.basis_fingerprint = basis.fingerprint();
  manifest.stages.push_back({"enumerate-modes", enumerate.seconds()});

  Stopwatch build;
  const ResolvedModel model = resolve_model(config);
  const EnergyContext ctx =
      make_energy_context(std::move(basis), model.lambda, model.spec,
                          grid_override(config, box));
  manifest.stages.push_back({"build-context", build.seconds()});

  Stopwatch solve;
  const SolverReport report = ground_state(ctx, config.solver);
  manifest.stages.push_back({"solve", solve.seconds()});

  Stopwatch emit;
  const EnergyBreakdown energy = evaluate_energy(report.state, ctx);
  const StateNorms norms = compute_norms(report.state, ctx);
  const NehariResidual residual = nehari_residual(report.state, ctx);
  write_artifact(dir, "report.json",
                 solver_report_json(report, energy, norms, residual), result);
  const GridSpec raster = GridSpec::uniform_vertex(box, kExportResolution);
  const GridField field = synthesize(report.state, ctx.basis, raster);
  write_artifact(dir, "field.vtk", vtk_structured_points(field, "E"), result);
  manifest.stages.push_back({"emit", emit.seconds()});
}

void run_symmetric(const RunConfig& config, const fs::path& dir,
                   RunManifest& manifest, RunResult& result) {
  Stopwatch build;
  const CylinderDomain cylinder(config.radius, config.height);
  const MeridianGrid grid = make_meridian_grid(cylinder, config.nr, config.nz);
  manifest.basis_fingerprint = meridian_fingerprint(grid);
  const ResolvedModel model = resolve_model(config);
  const AxisymContext ctx =
      make_axisym_context(grid, model.lambda, model.spec);
  manifest.stages.push_back({"build-context", build.seconds()});

  std::vector<SectorOutcome> outcomes;
  for (Sector sector : {Sector::all, Sector::even_z, Sector::odd_z}) {
    Stopwatch solve;
    SectorOutcome outcome;
    outcome.sector = sector;
    try {
      outcome.report = solve_symmetric(ctx, sector, config.solver);
      outcome.solved = true;
    } catch (const RegimeError& error) {
      outcome.refusal = error.what();
    } catch (const SolverError& error) {
      // The unconstrained sector is the command's headline answer; parity
      // rows are extra structure, so only their failures degrade to notes.
      if (sector == Sector::all) throw;
      outcome.refusal = error.what();
    }
    outcomes.push_back(std::move(outcome));
    manifest.stages.push_back(
        {std::string("solve-") + to_string(sector), solve.seconds()});
  }

  Stopwatch emit;
  write_artifact(dir, "sectors.json", sector_table_json(outcomes, grid),
                 result);
  const SectorOutcome* best = nullptr;
  for (const SectorOutcome& outcome : outcomes) {
    if (outcome.solved &&
        (!best || outcome.report.value < best->report.value)) {
      best = &outcome;
    }
  }
  if (best) {
    write_artifact(dir, "profile.csv", profile_csv(best->report.state, grid),
                   result);
    const BoxDomain bounding(2.0 * config.radius, 2.0 * config.radius,
                             config.height);
    const GridSpec raster =
        GridSpec::uniform_vertex(bounding, kExportResolution);
    const GridField lifted = lift_to_3d(best->report.state, grid, raster);
    write_artifact(dir, "lifted.vtk", vtk_structured_points(lifted, "E"),
                   result);
  }
  manifest.stages.push_back({"emit", emit.seconds()});
  if (!best) {
    // The sector table (all rows refused) is already on disk for diagnosis,
    // but a run with no solvable sector has no answer to report.
    throw RegimeError(outcomes.front().refusal);
  }
}

void run_check(const RunConfig& config, const fs::path& dir,
               RunManifest& manifest, RunResult& result) {
  Stopwatch screen;
  const BoxDomain box = box_domain(config);
  SamplerConfig sampler;
  sampler.seed = config.seed;
  ConditionReport report;
  if (screening_only(config.nonlinearity)) {
    report = check_conditions(polynomial_black_box(config.nonlinearity.poly),
                              box, sampler);
  } else {
    report =
        check_conditions(build_nonlinearity(config.nonlinearity), box, sampler);
  }
  manifest.stages.push_back({"screen", screen.seconds()});
  Stopwatch emit;
  write_artifact(dir, "conditions.json", condition_report_json(report),
                 result);
  manifest.stages.push_back({"emit", emit.seconds()});
}

void run_oracle(const RunConfig& config, const fs::path& dir,
                RunManifest& manifest, RunResult& result) {
  Stopwatch enumerate;
  const BoxDomain box = box_domain(config);
  ModeBasis basis = enumerate_modes(box, config.cutoff);
  manifest.basis_fingerprint = basis.fingerprint();
  manifest.stages.push_back({"enumerate-modes", enumerate.seconds()});
  Stopwatch build;
  const ResolvedModel model = resolve_model(config);
  const EnergyContext ctx =
      make_energy_context(std::move(basis), model.lambda, model.spec,
                          grid_override(config, box));
  manifest.stages.push_back({"build-context", build.seconds()});
  Stopwatch solve;
  const OracleResult oracle = oracle_dense(ctx, config.solver);
  manifest.stages.push_back({"solve", solve.seconds()});
  Stopwatch emit;
  write_artifact(dir, "oracle.json", oracle_json(oracle), result);
  manifest.stages.push_back({"emit", emit.seconds()});
}

}  // namespace

NonlinearitySpec build_nonlinearity(const NonlinearityConfig& config) {
  switch (config.kind) {
    case NonlinearityConfig::Kind::kerr: {
      PowerTerm term;
      term.gamma = config.gamma.build();
      term.exponent = 4.0;
      return NonlinearitySpec::power({term});
    }
    case NonlinearityConfig::Kind::power: {
      PowerTerm term;
      term.gamma = config.gamma.build();
      term.exponent = config.exponent;
      if (config.matrix) {
        const auto& m = *config.matrix;
        term.matrix << m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7], m[8];
      }
      return NonlinearitySpec::power({term});
    }
    case NonlinearityConfig::Kind::polynomial: {
      if (screening_only(config)) {
        throw ConfigError(
            "this polynomial nonlinearity is screening-only; solvers need "
            "strictly positive coefficients with exponents in (2, 6)");
      }
      std::vector<PowerTerm> terms;
      for (std::size_t i = 0; i + 1 < config.poly.size(); i += 2) {
        PowerTerm term;
        // c |u|^p stored as (gamma/p) |u|^p.
        term.gamma =
            CoefficientField::constant(config.poly[i] * config.poly[i + 1]);
        term.exponent = config.poly[i + 1];
        terms.push_back(std::move(term));
      }
      return NonlinearitySpec::power(std::move(terms));
    }
    case NonlinearityConfig::Kind::zero:
      return NonlinearitySpec::zero();
  }
  throw StructuralError("unhandled nonlinearity kind");
}

ResolvedModel resolve_model(const RunConfig& config) {
  if (config.physics) {
    const KerrMedium medium =
        kerr_from_physics(config.physics->eps, config.physics->mu,
                          config.physics->omega,
                          config.nonlinearity.gamma.build());
    return ResolvedModel{medium.lambda, medium.spec};
  }
  return ResolvedModel{config.lambda.value_or(0.0),
                       build_nonlinearity(config.nonlinearity)};
}

RunResult run(const RunConfig& config) {
  Stopwatch total;
  RunResult result;
  RunManifest manifest;
  manifest.tool_version = tool_version();
  manifest.config_echo = serialize_config(config);
  manifest.threads = Eigen::nbThreads();
  const fs::path dir(config.out_dir);
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw ConfigError("cannot create output directory " + dir.string() +
                        ": " + ec.message());
    }
    switch (config.command) {
      case Command::eigs:
        run_eigs(config, dir, manifest, result);
        break;
      case Command::ground:
        run_ground(config, dir, manifest, result);
        break;
      case Command::symmetric:
        run_symmetric(config, dir, manifest, result);
        break;
      case Command::check_nonlinearity:
        run_check(config, dir, manifest, result);
        break;
      case Command::oracle:
        run_oracle(config, dir, manifest, result);
        break;
    }
  } catch (const ConfigError& error) {
    result.exit_code = 2;
    result.message = error.what();
  } catch (const RegimeError& error) {
    result.exit_code = 2;
    result.message = error.what();
  } catch (const AliasingError& error) {
    result.exit_code = 2;
    result.message = error.what();
  } catch (const std::exception& error) {
    result.exit_code = 1;
    result.message = error.what();
  }
  if (!result.message.empty()) {
    manifest.errors.push_back(result.message);
  }
  manifest.wall_seconds = total.seconds();
  try {
    write_artifact(dir, "manifest.json", manifest_json(manifest), result);
  } catch (const std::exception& error) {
    if (result.exit_code == 0) {
      result.exit_code = 2;
      result.message = error.what();
    }
  }
  return result;
}

}  // namespace curlgs
