#pragma once

#include <array>
#include <vector>

#include "curlgs/geometry.hpp"

namespace curlgs {

// Scalar material coefficient on a box domain. Four shapes are supported:
// constant, axis-aligned step, Gaussian bump, and a vertex-centered sample
// table with trilinear interpolation. Every shape carries certified lower
// and upper bounds over the whole domain; construction rejects fields whose
// lower bound is not strictly positive.
class CoefficientField {
 public:
  enum class Kind { Constant, Step, Bump, Table };

  static CoefficientField constant(double value);

  // value_low on {x[axis] < threshold}, value_high on the other side.
  static CoefficientField step(int axis, double threshold, double value_low,
                               double value_high);

  // baseline + amplitude * exp(-|x - center|^2 / (2 width^2)). The bounds are
  // baseline + min(0, amplitude) and baseline + max(0, amplitude); they hold
  // on any domain because the exponential stays in (0, 1].
  static CoefficientField bump(double baseline, double amplitude,
                               const Vec3& center, double width);

  // Vertex-centered samples over the box, shape[i] >= 2 vertices per axis,
  // x1-fastest storage. Trilinear interpolation never leaves the sample
  // range, so the table extrema are valid bounds. Points outside the box are
  // clamped to it.
  static CoefficientField table(const BoxDomain& box,
                                const std::array<int, 3>& shape,
                                std::vector<double> values);

  double operator()(const Vec3& x) const;

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double min_bound() const { return min_bound_; }
  double max_bound() const { return max_bound_; }

  // Same field multiplied by a positive factor.
  CoefficientField scaled(double factor) const;

 private:
  CoefficientField() = default;
  void finalize_bounds(double lo, double hi);

  Kind kind_ = Kind::Constant;
  int axis_ = 0;
  double value_a_ = 1.0;
  double value_b_ = 0.0;
  double threshold_ = 0.0;
  double width_ = 1.0;
  Vec3 center_ = Vec3::Zero();
  std::array<int, 3> shape_{0, 0, 0};
  std::array<double, 3> edge_{1.0, 1.0, 1.0};
  std::vector<double> values_;
  double min_bound_ = 1.0;
  double max_bound_ = 1.0;
};

}  // namespace curlgs
