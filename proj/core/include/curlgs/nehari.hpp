// Constrained-maximization reduction for the indefinite energy J: project a
// positive-block direction onto the generalized Nehari set by maximizing J
// over its ray-plus-negative-space slab, then minimize the reduced value
// over the unit sphere of the positive block. Includes residual diagnostics
// and a brute-force oracle for small coefficient dimensions.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curlgs/energy.hpp"

namespace curlgs {

// Maximizer of J over the slab R+ * direction (+) span(tilde, kernel,
// gradient modes). The assembled state is t * direction on the plus block,
// `tilde` on the tilde and kernel blocks (split order: tilde_indices then
// kernel_indices), and `w` on the gradient block.
struct NehariPoint {
  Eigen::VectorXd direction;  // unit coefficients over the plus block
  double t = 0.0;             // ray scale, positive at a valid point
  Eigen::VectorXd tilde;      // coefficients over tilde + kernel modes
  Eigen::VectorXd w;          // gradient-block coefficients
  double value = 0.0;         // J at the assembled state
  // max(|J'(u)[u]|, max over tilde/kernel/gradient basis fields |J'(u)[phi]|);
  // at most tol_inner * (1 + |J|) on successful returns.
  double inner_residual = 0.0;
};

struct LinesearchConfig {
  double shrink = 0.5;                // backtracking factor, in (0, 1)
  double sufficient_decrease = 1e-4;  // Armijo constant, in (0, 1)

  bool operator==(const LinesearchConfig&) const = default;
};

struct SolverConfig {
  double tol_inner = 1e-10;  // joint stationarity, relative to |J| + 1
  double tol_outer = 1e-7;   // norm of the sphere-tangential reduced gradient
  int max_inner_iters = 400;
  int max_outer_iters = 400;
  LinesearchConfig linesearch;
  int restarts = 4;
  std::uint64_t seed = 1;

  bool operator==(const SolverConfig&) const = default;
};

// One outer iteration of the reduced descent: value of J on the constraint
// set and the norm of its tangential gradient. A bounded value column with
// gradient column tending to zero is the discrete compactness diagnostic.
struct PsRecord {
  double value = 0.0;
  double gradient_norm = 0.0;
};

struct SolverReport {
  double c0 = 0.0;       // minimal constrained value of J; positive
  StateVector state;     // minimizing field coefficients
  double outer_residual = 0.0;  // final tangential gradient norm
  std::vector<PsRecord> ps_history;  // best restart's iteration trace
  double multistart_spread = 0.0;    // max - min over converged restarts
  double plus_norm = 0.0;    // min over converged restarts of the positive
                             // block norm of the projected state (delta')
  double el_residual = 0.0;  // max over basis fields of |J'(state)[phi]| with
                             // phi normalized to unit L2 norm
  int converged_restarts = 0;
  std::vector<std::string> warnings;
};

struct NehariResidual {
  double self_pairing = 0.0;    // J'(state)[state]
  double tilde_residual = 0.0;  // max |J'(state)[phi]| over tilde, kernel,
                                // and gradient basis fields
};

struct OracleResult {
  double c0_oracle = 0.0;
  StateVector state;
  // Largest relative disagreement between independent inner restarts of the
  // same direction; small values confirm a unique inner maximizer.
  double max_cluster_spread = 0.0;
  int n_directions = 0;
};

// The state t * direction + tilde + w encoded by a NehariPoint.
StateVector assemble_state(const NehariPoint& point, const EnergyContext& ctx);

// Maximizes J over the slab through `direction` (any nonzero plus-block
// coefficient vector; only its ray matters). Alternates concave gradient
// ascent on the tilde/kernel/gradient blocks with a bracketed scalar solve
// in the ray scale until joint stationarity. Requires a nondegenerate convex
// nonlinearity; when the kernel block is nonempty the spec must certify
// strict convexity.
NehariPoint inner_maximize(const Eigen::VectorXd& direction,
                           const EnergyContext& ctx, const SolverConfig& cfg);

// Minimizes the reduced value u -> J(inner_maximize(u)) over the unit sphere
// of the plus block by Riemannian gradient descent with backtracking, using
// the exact reduction gradient t * tangential(J'(state)) on plus
// coefficients. Runs cfg.restarts seeded starts (alternating low-frequency
// biased and uniform) and returns the best converged run.
SolverReport ground_state(const EnergyContext& ctx, const SolverConfig& cfg);

// Stationarity diagnostics characterizing membership in the constraint set.
NehariResidual nehari_residual(const StateVector& state,
                               const EnergyContext& ctx);

// Brute-force minimizer for problems with at most 12 coefficients: scans
// >= 200 random directions, solves each inner problem with an independent
// projected-gradient maximizer (two restarts per direction, clustered), and
// polishes the best directions with finite-difference sphere descent.
OracleResult oracle_dense(const EnergyContext& ctx, const SolverConfig& cfg);

}  // namespace curlgs
