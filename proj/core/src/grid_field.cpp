#include "curlgs/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curlgs/errors.hpp"
#include "curlgs/modes.hpp"
#include "curlgs/quadrature.hpp"

namespace curlgs {

GridSpec GridSpec::gauss(const BoxDomain& box, const std::array<int, 3>& n) {
  GridSpec spec;
  spec.kind = GridKind::Gauss;
  spec.resolution = n;
  for (int axis = 0; axis < 3; ++axis) {
    AxisRule rule = gauss_legendre(n[axis], box.edge[axis]);
    spec.nodes[axis] = std::move(rule.nodes);
    spec.weights[axis] = std::move(rule.weights);
  }
  return spec;
}

GridSpec GridSpec::uniform_vertex(const BoxDomain& box, const std::array<int, 3>& n) {
  GridSpec spec;
  spec.kind = GridKind::UniformVertex;
  spec.resolution = n;
  for (int axis = 0; axis < 3; ++axis) {
    const int m = n[axis];
    if (m < 2) throw StructuralError("uniform_vertex: need at least two nodes per axis");
    const double h = box.edge[axis] / (m - 1);
    spec.nodes[axis].resize(m);
    spec.weights[axis].resize(m);
    for (int i = 0; i < m; ++i) {
      spec.nodes[axis][i] = i * h;
      spec.weights[axis][i] = (i == 0 || i == m - 1) ? 0.5 * h : h;
    }
  }
  return spec;
}

GridSpec default_grid(const ModeBasis& basis, double p_max) {
  const auto freq = basis.max_frequency();
  const int q = std::max(2, static_cast<int>(std::ceil(p_max)));
  std::array<int, 3> n;
  for (int axis = 0; axis < 3; ++axis) {
    n[axis] = std::max(8, 2 * q * freq[axis] + 10);
  }
  return GridSpec::gauss(basis.domain, n);
}

void require_dealiasing(const GridSpec& grid, const ModeBasis& basis, double p,
                        const char* operation) {
  if (grid.kind != GridKind::Gauss) {
    throw StructuralError(std::string(operation) + ": quadrature requires a Gauss grid");
  }
  const auto freq = basis.max_frequency();
  const int factor = static_cast<int>(std::ceil(p / 2.0)) + 1;
  int required[3];
  bool ok = true;
  for (int axis = 0; axis < 3; ++axis) {
    required[axis] = factor * freq[axis];
    if (grid.resolution[axis] < required[axis]) ok = false;
  }
  if (!ok) {
    throw AliasingError(std::string(operation) + ": grid resolution " +
                            std::to_string(grid.resolution[0]) + "x" +
                            std::to_string(grid.resolution[1]) + "x" +
                            std::to_string(grid.resolution[2]) +
                            " is below the de-aliasing minimum " + std::to_string(required[0]) +
                            "x" + std::to_string(required[1]) + "x" + std::to_string(required[2]),
                        required[0], required[1], required[2]);
  }
}

}  // namespace curlgs
