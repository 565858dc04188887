// Gauss-Legendre quadrature and deterministic summation helpers.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curlgs {

// Nodes and weights of the n-point Gauss-Legendre rule mapped to [0, length].
struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

AxisRule gauss_legendre(int n, double length);

// Pairwise (tree) summation with a fixed reduction schedule. Used for all
// quadrature accumulations so results do not depend on how work is chunked.
double pairwise_sum(std::span<const double> values);

}  // namespace curlgs
