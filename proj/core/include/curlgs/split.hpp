// Sign partition of the divfree basis under the shifted quadratic form
// Q(v) = |curl v|^2 + lambda |v|^2: plus where lambda_k + lambda > 0, kernel
// where it vanishes, tilde where it is negative.
#pragma once

#include <optional>
#include <vector>

#include "curlgs/modes.hpp"

namespace curlgs {

struct SpaceSplit {
  double lambda = 0.0;
  std::vector<int> plus_indices;
  std::vector<int> tilde_indices;
  std::vector<int> kernel_indices;
  // Number of modes on which the form is nonpositive (tilde + kernel).
  int n = 0;
  // Coercivity margin: min over plus modes of (lambda_k + lambda) / lambda_k,
  // so Q(v) >= delta * |v|_V^2 on the plus span.
  double delta = 0.0;
  // Strict-negativity margin on the tilde span: min over tilde modes of
  // -(lambda_k + lambda) / lambda_k. Absent when tilde is empty.
  std::optional<double> tilde_margin;
  // Kernel nonempty: downstream solvers must require strict convexity of F.
  bool needs_strict_convexity = false;
};

// Requires lambda <= 0 (the 3D solver's regime; the cylinder solver has its
// own definiteness rule). Eigenvalues within 1e-12 * (1 + |lambda|) of
// -lambda are classified as kernel.
SpaceSplit split_spaces(const ModeBasis& basis, double lambda);

}  // namespace curlgs
