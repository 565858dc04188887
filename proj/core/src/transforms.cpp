#include "curlgs/transforms.hpp"

#include <cmath>
#include <vector>

#include "curlgs/errors.hpp"
#include "curlgs/quadrature.hpp"

namespace curlgs {

namespace {

// Per-axis sin/cos tables of one mode at the grid nodes.
struct AxisTables {
  std::vector<double> s[3];
  std::vector<double> c[3];
};

AxisTables build_tables(const Mode& m, const GridSpec& grid) {
  AxisTables t;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& xs = grid.nodes[axis];
    t.s[axis].resize(xs.size());
    t.c[axis].resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      t.s[axis][i] = std::sin(m.khat[axis] * xs[i]);
      t.c[axis][i] = std::cos(m.khat[axis] * xs[i]);
    }
  }
  return t;
}

// values += coeff * mode over the whole grid.
void accumulate_mode(Eigen::Matrix3Xd& values, const Mode& m, double coeff,
                     const GridSpec& grid) {
  if (coeff == 0.0) return;
  const AxisTables t = build_tables(m, grid);
  const Vec3 a = coeff * m.amplitude;
  const int n1 = grid.resolution[0], n2 = grid.resolution[1], n3 = grid.resolution[2];
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n3; ++i3) {
    const double s3 = t.s[2][i3], c3 = t.c[2][i3];
    for (int i2 = 0; i2 < n2; ++i2) {
      const double s2 = t.s[1][i2], c2 = t.c[1][i2];
      const double f0 = a[0] * s2 * s3;  // times cos(x1)
      const double f1 = a[1] * c2 * s3;  // times sin(x1)
      const double f2 = a[2] * s2 * c3;  // times sin(x1)
      for (int i1 = 0; i1 < n1; ++i1, ++idx) {
        const double s1 = t.s[0][i1], c1 = t.c[0][i1];
        values(0, idx) += f0 * c1;
        values(1, idx) += f1 * s1;
        values(2, idx) += f2 * s1;
      }
    }
  }
}

// Quadrature inner product of the field with one mode.
double mode_inner(const Eigen::Matrix3Xd& values, const Mode& m, const GridSpec& grid,
                  std::vector<double>& scratch) {
  const AxisTables t = build_tables(m, grid);
  const Vec3& a = m.amplitude;
  const int n1 = grid.resolution[0], n2 = grid.resolution[1], n3 = grid.resolution[2];
  scratch.resize(grid.size());
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n3; ++i3) {
    const double s3 = t.s[2][i3], c3 = t.c[2][i3];
    const double w3 = grid.weights[2][i3];
    for (int i2 = 0; i2 < n2; ++i2) {
      const double s2 = t.s[1][i2], c2 = t.c[1][i2];
      const double w23 = w3 * grid.weights[1][i2];
      const double f0 = a[0] * s2 * s3;
      const double f1 = a[1] * c2 * s3;
      const double f2 = a[2] * s2 * c3;
      for (int i1 = 0; i1 < n1; ++i1, ++idx) {
        const double s1 = t.s[0][i1], c1 = t.c[0][i1];
        const double w = w23 * grid.weights[0][i1];
        scratch[idx] = w * (values(0, idx) * f0 * c1 + values(1, idx) * f1 * s1 +
                            values(2, idx) * f2 * s1);
      }
    }
  }
  return pairwise_sum(scratch);
}

}  // namespace

GridField synthesize(const StateVector& state, const ModeBasis& basis, const GridSpec& grid) {
  require_compatible(state, basis, "synthesize");
  GridField field = GridField::zero(grid);
  for (std::size_t k = 0; k < basis.divfree.size(); ++k) {
    accumulate_mode(field.values, basis.divfree[k], state.divfree[k], grid);
  }
  for (std::size_t j = 0; j < basis.gradient.size(); ++j) {
    accumulate_mode(field.values, basis.gradient[j], state.gradient[j], grid);
  }
  return field;
}

StateVector project(const GridField& field, const ModeBasis& basis) {
  require_dealiasing(field.grid, basis, 2.0, "project");
  if (field.values.cols() != static_cast<Eigen::Index>(field.grid.size())) {
    throw StructuralError("project: field values do not match its grid");
  }
  StateVector state = StateVector::zero(basis);
  std::vector<double> scratch;
  for (std::size_t k = 0; k < basis.divfree.size(); ++k) {
    state.divfree[k] = mode_inner(field.values, basis.divfree[k], field.grid, scratch);
  }
  for (std::size_t j = 0; j < basis.gradient.size(); ++j) {
    // Gradient fields are not unit vectors: |grad w_j|^2 integrates to the
    // Dirichlet eigenvalue mu_j, so the coefficient divides the pairing by it.
    state.gradient[j] =
        mode_inner(field.values, basis.gradient[j], field.grid, scratch) /
        basis.gradient[j].eigenvalue;
  }
  return state;
}

Eigen::VectorXd resolvent_apply(const Eigen::VectorXd& divfree_coeffs, const ModeBasis& basis) {
  if (divfree_coeffs.size() != static_cast<Eigen::Index>(basis.divfree.size())) {
    throw StructuralError("resolvent_apply: coefficient count does not match basis");
  }
  Eigen::VectorXd out(divfree_coeffs.size());
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out[k] = divfree_coeffs[k] / (basis.divfree[k].eigenvalue + 1.0);
  }
  return out;
}

double boundary_trace_residual(const StateVector& state, const ModeBasis& basis,
                               int samples_per_face) {
  require_compatible(state, basis, "boundary_trace_residual");
  if (samples_per_face < 4) {
    throw StructuralError("boundary_trace_residual: need at least 4 samples per face");
  }
  auto field = [&](const Vec3& x) {
    Vec3 e = Vec3::Zero();
    for (std::size_t k = 0; k < basis.divfree.size(); ++k) {
      if (state.divfree[k] != 0.0) e += state.divfree[k] * mode_eval(basis.divfree[k], x);
    }
    for (std::size_t j = 0; j < basis.gradient.size(); ++j) {
      if (state.gradient[j] != 0.0) e += state.gradient[j] * mode_eval(basis.gradient[j], x);
    }
    return e;
  };
  return max_tangential_trace(field, basis.domain, samples_per_face);
}

}  // namespace curlgs
