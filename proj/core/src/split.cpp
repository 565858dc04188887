#include "curlgs/split.hpp"

#include <cmath>
#include <limits>

#include "curlgs/errors.hpp"

namespace curlgs {

SpaceSplit split_spaces(const ModeBasis& basis, double lambda) {
  if (basis.degenerate) {
    throw RegimeError("split_spaces: basis is degenerate (cutoff below the smallest eigenvalue)");
  }
  if (!(lambda <= 0.0)) {
    throw RegimeError("split_spaces: requires lambda <= 0");
  }

  SpaceSplit split;
  split.lambda = lambda;
  const double kernel_tol = 1e-12 * (1.0 + std::abs(lambda));

  double delta = std::numeric_limits<double>::infinity();
  double tilde_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(basis.divfree.size()); ++k) {
    const double q = basis.divfree[k].eigenvalue + lambda;
    if (std::abs(q) <= kernel_tol) {
      split.kernel_indices.push_back(k);
    } else if (q > 0.0) {
      split.plus_indices.push_back(k);
      delta = std::min(delta, q / basis.divfree[k].eigenvalue);
    } else {
      split.tilde_indices.push_back(k);
      tilde_margin = std::min(tilde_margin, -q / basis.divfree[k].eigenvalue);
    }
  }

  if (split.plus_indices.empty()) {
    throw RegimeError(
        "split_spaces: quadratic part has no positive subspace at this cutoff "
        "(increase the cutoff)");
  }
  split.n = static_cast<int>(split.tilde_indices.size() + split.kernel_indices.size());
  split.delta = delta;
  if (!split.tilde_indices.empty()) split.tilde_margin = tilde_margin;
  split.needs_strict_convexity = !split.kernel_indices.empty();
  return split;
}

}  // namespace curlgs
