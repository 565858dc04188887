// Domains for the cavity problem: axis-aligned boxes and, for the
// symmetry-reduced solver, upright circular cylinders.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

namespace curlgs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct BoxDomain {
  std::array<double, 3> edge;  // edge lengths L1, L2, L3 (> 0)

  BoxDomain(double l1, double l2, double l3) : edge{l1, l2, l3} {
    for (double l : edge) {
      if (!(l > 0.0)) throw std::invalid_argument("BoxDomain: edge lengths must be positive");
    }
  }

  double volume() const { return edge[0] * edge[1] * edge[2]; }

  bool contains(const Vec3& x, double pad = 0.0) const {
    for (int i = 0; i < 3; ++i) {
      if (x[i] < -pad || x[i] > edge[i] + pad) return false;
    }
    return true;
  }
};

// Cylinder {x1^2 + x2^2 < R^2, 0 < x3 < H}, axis along x3.
struct CylinderDomain {
  double radius;
  double height;

  CylinderDomain(double r, double h) : radius(r), height(h) {
    if (!(r > 0.0) || !(h > 0.0)) {
      throw std::invalid_argument("CylinderDomain: radius and height must be positive");
    }
  }

  bool contains(const Vec3& x, double pad = 0.0) const {
    const double r = std::hypot(x[0], x[1]);
    return r <= radius + pad && x[2] >= -pad && x[2] <= height + pad;
  }
};

}  // namespace curlgs
