#include "curlgs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curlgs {

// Newton iteration on Legendre polynomials; standard Golub-Welsch-free
// construction, accurate to machine precision for the sizes used here.
AxisRule gauss_legendre(int n, double length) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  if (!(length > 0.0)) throw std::invalid_argument("gauss_legendre: length must be positive");

  AxisRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);

    // Map from [-1, 1] to [0, length]; roots come out in decreasing order.
    rule.nodes[i] = 0.5 * length * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * length * (1.0 + x);
    rule.weights[i] = 0.5 * length * w;
    rule.weights[n - 1 - i] = 0.5 * length * w;
  }
  return rule;
}

namespace {

double pairwise_sum_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

}  // namespace curlgs
