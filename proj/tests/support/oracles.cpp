#include "support/oracles.hpp"

namespace curlgs::testing {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double product_integral(const std::function<double(double)>& f1,
                        const std::function<double(double)>& f2,
                        const std::function<double(double)>& f3, const BoxDomain& box, int n) {
  return simpson(f1, 0.0, box.edge[0], n) * simpson(f2, 0.0, box.edge[1], n) *
         simpson(f3, 0.0, box.edge[2], n);
}

StateVector random_state(const ModeBasis& basis, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  StateVector s = StateVector::zero(basis);
  for (Eigen::Index i = 0; i < s.divfree.size(); ++i) s.divfree[i] = dist(rng);
  for (Eigen::Index i = 0; i < s.gradient.size(); ++i) s.gradient[i] = dist(rng);
  return s;
}

double central_difference(const std::function<double(double)>& g, double h) {
  return (g(h) - g(-h)) / (2.0 * h);
}

}  // namespace curlgs::testing
