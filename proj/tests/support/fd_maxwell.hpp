// Independent discretization of the cavity eigenproblem: a staggered-grid
// (Yee) curl-curl operator on edge unknowns with tangential-boundary edges
// removed and a penalty pushing gradient modes out of the low spectrum.
// Used to cross-check the analytic mode enumeration.
#pragma once

#include <array>
#include <vector>

#include "curlgs/modes.hpp"

namespace curlgs::testing {

struct YeeOptions {
  int cells = 16;        // grid cells per axis
  double penalty = 10.0; // weight on the grad-div term that lifts gradient modes
  int subspace = 30;     // block size of the inverse subspace iteration
  int iterations = 40;   // inverse iterations before Rayleigh-Ritz
  unsigned seed = 42;    // start-block seed, fixed for reproducibility
};

// The `count` smallest eigenvalues of the penalized edge operator
// C^T C + penalty G G^T, ascending.
std::vector<double> fd_maxwell_eigenvalues(const BoxDomain& box, int count,
                                           const YeeOptions& options = {});

// Exact eigenvalue of the discrete operator for the analytic mode with
// integer index k: sum_i (4 / h_i^2) sin^2(k_i pi h_i / (2 L_i)).
double yee_dispersion(const std::array<int, 3>& k, const BoxDomain& box,
                      int cells);

}  // namespace curlgs::testing
