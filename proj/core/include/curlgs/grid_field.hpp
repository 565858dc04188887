// Tensor-product sample grids over a box and vector fields living on them.
// Values are stored as a 3 x N matrix with the x1 index fastest, i.e. flat
// index (i3 * N2 + i2) * N1 + i1.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "curlgs/geometry.hpp"

namespace curlgs {

struct ModeBasis;

enum class GridKind { Gauss, UniformVertex };

struct GridSpec {
  GridKind kind;
  std::array<int, 3> resolution;
  std::array<std::vector<double>, 3> nodes;
  std::array<std::vector<double>, 3> weights;

  // Gauss-Legendre nodes per axis; exact for the trig products the solver
  // integrates when the resolution honors the de-aliasing rule.
  static GridSpec gauss(const BoxDomain& box, const std::array<int, 3>& n);
  // Vertex lattice including the boundary, trapezoid weights. Used for field
  // export, not for solver quadrature.
  static GridSpec uniform_vertex(const BoxDomain& box, const std::array<int, 3>& n);

  std::size_t size() const {
    return static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2];
  }
  std::size_t flat(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i3) * resolution[1] + i2) * resolution[0] + i1;
  }
  Vec3 node(int i1, int i2, int i3) const {
    return Vec3(nodes[0][i1], nodes[1][i2], nodes[2][i3]);
  }
  double weight(int i1, int i2, int i3) const {
    return weights[0][i1] * weights[1][i2] * weights[2][i3];
  }
};

// Default quadrature grid for a basis and nonlinearity exponent: generous
// enough that Gauss-Legendre integrates the trig products appearing in the
// energy and its gradient to machine precision (empirically n >= 1.7K + 9
// for combined per-axis frequency K; we use 2K + 10). For non-integer p the
// integrand is not a trig polynomial and this is a heuristic resolution.
GridSpec default_grid(const ModeBasis& basis, double p_max);

// Per-axis minimum resolution (ceil(p/2)+1 times the max mode frequency)
// below which products of degree p alias. Throws AliasingError when the grid
// is too coarse, and StructuralError when quadrature is requested on a
// non-Gauss grid.
void require_dealiasing(const GridSpec& grid, const ModeBasis& basis, double p,
                        const char* operation);

struct GridField {
  GridSpec grid;
  Eigen::Matrix3Xd values;  // column per grid point

  static GridField zero(const GridSpec& spec) {
    return GridField{spec, Eigen::Matrix3Xd::Zero(3, static_cast<Eigen::Index>(spec.size()))};
  }
};

}  // namespace curlgs
