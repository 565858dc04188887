#include "curlgs/coefficient_field.hpp"

#include <algorithm>
#include <cmath>

#include "curlgs/errors.hpp"

namespace curlgs {

void CoefficientField::finalize_bounds(double lo, double hi) {
  if (!(lo > 0.0)) {
    throw ConfigError(
        "coefficient field must be strictly positive on the domain (lower "
        "bound " +
        std::to_string(lo) + ")");
  }
  min_bound_ = lo;
  max_bound_ = hi;
}

CoefficientField CoefficientField::constant(double value) {
  CoefficientField f;
  f.kind_ = Kind::Constant;
  f.value_a_ = value;
  f.finalize_bounds(value, value);
  return f;
}

CoefficientField CoefficientField::step(int axis, double threshold,
                                        double value_low, double value_high) {
  if (axis < 0 || axis > 2) {
    throw ConfigError("step coefficient axis must be 0, 1, or 2");
  }
  CoefficientField f;
  f.kind_ = Kind::Step;
  f.axis_ = axis;
  f.threshold_ = threshold;
  f.value_a_ = value_low;
  f.value_b_ = value_high;
  f.finalize_bounds(std::min(value_low, value_high),
                    std::max(value_low, value_high));
  return f;
}

CoefficientField CoefficientField::bump(double baseline, double amplitude,
                                        const Vec3& center, double width) {
  if (!(width > 0.0)) {
    throw ConfigError("bump coefficient width must be positive");
  }
  CoefficientField f;
  f.kind_ = Kind::Bump;
  f.value_a_ = baseline;
  f.value_b_ = amplitude;
  f.center_ = center;
  f.width_ = width;
  f.finalize_bounds(baseline + std::min(0.0, amplitude),
                    baseline + std::max(0.0, amplitude));
  return f;
}

CoefficientField CoefficientField::table(const BoxDomain& box,
                                         const std::array<int, 3>& shape,
                                         std::vector<double> values) {
  for (int a = 0; a < 3; ++a) {
    if (shape[a] < 2) {
      throw ConfigError("coefficient table needs at least 2 vertices per axis");
    }
  }
  const std::size_t expected = static_cast<std::size_t>(shape[0]) *
                               static_cast<std::size_t>(shape[1]) *
                               static_cast<std::size_t>(shape[2]);
  if (values.size() != expected) {
    throw ConfigError("coefficient table has " + std::to_string(values.size()) +
                      " samples, expected " + std::to_string(expected));
  }
  CoefficientField f;
  f.kind_ = Kind::Table;
  f.shape_ = shape;
  f.edge_ = box.edge;
  f.values_ = std::move(values);
  const auto [lo, hi] =
      std::minmax_element(f.values_.begin(), f.values_.end());
  f.finalize_bounds(*lo, *hi);
  return f;
}

double CoefficientField::operator()(const Vec3& x) const {
  switch (kind_) {
    case Kind::Constant:
      return value_a_;
    case Kind::Step:
      return x[axis_] < threshold_ ? value_a_ : value_b_;
    case Kind::Bump: {
      const double r2 = (x - center_).squaredNorm();
      return value_a_ + value_b_ * std::exp(-r2 / (2.0 * width_ * width_));
    }
    case Kind::Table: {
      int idx[3];
      double frac[3];
      for (int a = 0; a < 3; ++a) {
        const double h = edge_[a] / static_cast<double>(shape_[a] - 1);
        double t = std::clamp(x[a], 0.0, edge_[a]) / h;
        int i = static_cast<int>(std::floor(t));
        i = std::clamp(i, 0, shape_[a] - 2);
        idx[a] = i;
        frac[a] = t - static_cast<double>(i);
      }
      auto at = [&](int i1, int i2, int i3) {
        return values_[static_cast<std::size_t>(
            (i3 * shape_[1] + i2) * shape_[0] + i1)];
      };
      double acc = 0.0;
      for (int d3 = 0; d3 < 2; ++d3) {
        for (int d2 = 0; d2 < 2; ++d2) {
          for (int d1 = 0; d1 < 2; ++d1) {
            const double w = (d1 ? frac[0] : 1.0 - frac[0]) *
                             (d2 ? frac[1] : 1.0 - frac[1]) *
                             (d3 ? frac[2] : 1.0 - frac[2]);
            acc += w * at(idx[0] + d1, idx[1] + d2, idx[2] + d3);
          }
        }
      }
      return acc;
    }
  }
  throw StructuralError("unreachable coefficient field kind");
}

CoefficientField CoefficientField::scaled(double factor) const {
  if (!(factor > 0.0)) {
    throw ConfigError("coefficient scaling factor must be positive");
  }
  CoefficientField f = *this;
  f.value_a_ *= factor;
  if (kind_ == Kind::Step || kind_ == Kind::Bump) {
    f.value_b_ *= factor;
  }
  for (double& v : f.values_) {
    v *= factor;
  }
  f.min_bound_ *= factor;
  f.max_bound_ *= factor;
  return f;
}

}  // namespace curlgs
