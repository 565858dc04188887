// Run orchestration: executes one configured command and writes its
// artifacts plus a manifest into the output directory.
#pragma once

#include <string>
#include <vector>

#include "curlgs/config.hpp"
#include "curlgs/nonlinearity.hpp"

namespace curlgs {

struct RunResult {
  // 0: solved / artifacts emitted. 2: controlled refusal (configuration or
  // regime rejection). 1: internal failure (solver nonconvergence, logic
  // errors, anything unexpected).
  int exit_code = 0;
  std::vector<std::string> artifacts;  // paths written, in emission order
  std::string message;                 // empty on success
};

// Effective model after resolving the physics block: explicit lambda with
// the configured nonlinearity, or lambda = -mu omega^2 eps with the derived
// Kerr response.
struct ResolvedModel {
  double lambda = 0.0;
  NonlinearitySpec spec;
};

ResolvedModel resolve_model(const RunConfig& config);

// Builds the configured nonlinearity. Polynomial configs build only when
// every term is certifiable (positive coefficient, exponent in (2, 6));
// screening-only polynomials throw ConfigError.
NonlinearitySpec build_nonlinearity(const NonlinearityConfig& config);

// Executes config.command, writing artifacts and manifest.json into
// config.out_dir (created when absent). Never throws: refusals and failures
// come back in the exit code and message, and are recorded in the manifest.
RunResult run(const RunConfig& config);

}  // namespace curlgs
