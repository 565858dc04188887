#pragma once

#include <optional>

#include "curlgs/grid_field.hpp"
#include "curlgs/modes.hpp"
#include "curlgs/nonlinearity.hpp"
#include "curlgs/split.hpp"
#include "curlgs/state.hpp"

namespace curlgs {

// Immutable evaluation context for the energy
//   J(v,w) = 1/2 int |curl v|^2 + (lambda/2) int (|v|^2 + |grad w|^2)
//            - int F(x, v + grad w)
// with diagonal quadratic parts in mode coefficients and pseudo-spectral
// quadrature of the nonlinear term. Safe to share across threads once built.
struct EnergyContext {
  ModeBasis basis;
  SpaceSplit split;
  double lambda = 0.0;
  NonlinearitySpec nonlinearity;
  GridSpec grid;
  double p_norm = 4.0;  // exponent of the reported |grad w|_p norm
};

// Builds a context: splits the spectrum at lambda (requires lambda <= 0 and
// a nondegenerate basis) and picks a de-aliased Gauss grid when none is
// supplied. p_norm defaults to the nonlinearity's growth exponent.
EnergyContext make_energy_context(ModeBasis basis, double lambda,
                                  NonlinearitySpec nonlinearity,
                                  std::optional<GridSpec> grid = std::nullopt,
                                  std::optional<double> p_norm = std::nullopt);

struct EnergyBreakdown {
  double total = 0.0;        // J
  double quad_curl = 0.0;    // 1/2 int |curl v|^2
  double quad_lambda = 0.0;  // (lambda/2) int (|v|^2 + |grad w|^2)
  double potential = 0.0;    // int F(x, v + grad w)
  // Nonnegative remainder in the splitting J = 1/2 ||u+||^2 - I for
  // lambda <= 0, with ||u+||^2 the positive part of the quadratic form:
  // I = -1/2 sum_{k not plus} (lambda_k + lambda) v_k^2
  //     - (lambda/2) sum_j mu_j w_j^2 + potential.
  double I_value = 0.0;
};

EnergyBreakdown evaluate_energy(const StateVector& state,
                                const EnergyContext& ctx);

// Euclidean coefficient gradient of J, the exact adjoint of the discretized
// evaluation:
//   divfree k:  (lambda_k + lambda) v_k - <f(., E), e_k>_quad
//   gradient j: mu_j (lambda w_j - c_j), where c_j is the projection
//               coefficient of f onto grad w_j. The projection divides the
//               raw pairing <f, grad w_j>_quad by the field norm mu_j, so
//               multiplying by mu_j restores the pairing differentiation
//               produces.
StateVector energy_gradient(const StateVector& state, const EnergyContext& ctx);

struct StateNorms {
  double v_curl = 0.0;    // ||v||_V = sqrt(sum lambda_k v_k^2)
  double v_l2 = 0.0;      // |v|_2
  double w_gradp = 0.0;   // |grad w|_p by quadrature, p = ctx.p_norm
  double combined = 0.0;  // sqrt(v_curl^2 + w_gradp^2)
};

StateNorms compute_norms(const StateVector& state, const EnergyContext& ctx);

}  // namespace curlgs
