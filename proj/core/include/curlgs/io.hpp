// Artifact rendering: CSV, legacy VTK, and JSON report serialization, plus
// the run manifest. Everything renders to strings so callers decide where
// bytes go; given identical inputs the output is byte-identical. Floats are
// written in shortest round-trip decimal, and JSON report numbers carry
// parallel *_hex fields (C hexadecimal floats) for exact regression.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curlgs/axisym.hpp"
#include "curlgs/conditions.hpp"
#include "curlgs/energy.hpp"
#include "curlgs/nehari.hpp"

namespace curlgs {

const char* to_string(Sector sector);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);
// C hexadecimal float (printf %a); bit-exact and locale-free.
std::string format_double_hex(double value);

// Version string baked at build time.
std::string tool_version();

// index,k1,k2,k3,kind,polarization,eigenvalue over the divergence-free
// family followed by the gradient family, in basis order.
std::string spectrum_csv(const ModeBasis& basis);

// r,z,alpha rows over the meridian unknowns in grid index order.
std::string profile_csv(const AxisymState& state, const MeridianGrid& grid);

// Legacy ASCII VTK STRUCTURED_POINTS file holding one vector field. The
// field's grid must be a UniformVertex lattice (uniform spacing with the
// boundary included); Gauss grids are not plottable rasters.
std::string vtk_structured_points(const GridField& field,
                                  const std::string& field_name);

// FNV-1a over the meridian grid parameters, the cylinder counterpart of
// ModeBasis::fingerprint for run manifests.
std::uint64_t meridian_fingerprint(const MeridianGrid& grid);

// Ground-state report: minimal value, state coefficients, residuals, norms,
// the energy breakdown, and the descent trace of the best restart.
std::string solver_report_json(const SolverReport& report,
                               const EnergyBreakdown& energy,
                               const StateNorms& norms,
                               const NehariResidual& residual);

// One row of the symmetric command's sector table. Sectors that cannot be
// posed (asymmetric coefficients) are refused; sectors whose solve failed
// carry the failure text instead of a state.
struct SectorOutcome {
  Sector sector = Sector::all;
  bool solved = false;
  std::string refusal;
  SectorReport report;
};

std::string sector_table_json(const std::vector<SectorOutcome>& outcomes,
                              const MeridianGrid& grid);

std::string condition_report_json(const ConditionReport& report);

std::string oracle_json(const OracleResult& result);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

// Reproducibility metadata for one run. The echoed config plus the build
// version identify the run completely; the fingerprint pins the basis the
// solver actually used. Timings make the manifest the one artifact that is
// not byte-identical across repeated runs.
struct RunManifest {
  std::string tool_version;
  std::string config_echo;
  std::uint64_t basis_fingerprint = 0;
  int threads = 1;
  double wall_seconds = 0.0;
  std::vector<StageTiming> stages;
  // Provenance notes for any pinned constants a run consumed; stays empty in
  // normal operation (recorded values live in the test suite, not the tool).
  std::vector<std::string> fixture_values;
  std::vector<std::string> errors;
};

std::string manifest_json(const RunManifest& manifest);

}  // namespace curlgs
