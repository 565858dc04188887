#include "curlgs/energy.hpp"

#include <cmath>
#include <vector>

#include "curlgs/errors.hpp"
#include "curlgs/quadrature.hpp"
#include "curlgs/transforms.hpp"

namespace curlgs {

namespace {

// Integral of F(x, E(x)) over the box by tensor Gauss quadrature with a
// deterministic pairwise reduction.
double potential_integral(const GridField& field, const NonlinearitySpec& nl) {
  const GridSpec& g = field.grid;
  std::vector<double> terms(g.size());
  for (int i3 = 0; i3 < g.resolution[2]; ++i3) {
    for (int i2 = 0; i2 < g.resolution[1]; ++i2) {
      for (int i1 = 0; i1 < g.resolution[0]; ++i1) {
        const std::size_t idx = g.flat(i1, i2, i3);
        terms[idx] = g.weight(i1, i2, i3) *
                     nl.F(g.node(i1, i2, i3),
                          field.values.col(static_cast<Eigen::Index>(idx)));
      }
    }
  }
  return pairwise_sum(terms);
}

}  // namespace

EnergyContext make_energy_context(ModeBasis basis, double lambda,
                                  NonlinearitySpec nonlinearity,
                                  std::optional<GridSpec> grid,
                                  std::optional<double> p_norm) {
  SpaceSplit split = split_spaces(basis, lambda);
  const double p = nonlinearity.constants().p;
  GridSpec resolved =
      grid.has_value() ? std::move(*grid) : default_grid(basis, p);
  require_dealiasing(resolved, basis, p, "energy context");
  const double pn = p_norm.value_or(p);
  if (!(pn >= 1.0)) {
    throw ConfigError("norm exponent must be at least 1");
  }
  return EnergyContext{std::move(basis),        std::move(split), lambda,
                       std::move(nonlinearity), std::move(resolved), pn};
}

EnergyBreakdown evaluate_energy(const StateVector& state,
                                const EnergyContext& ctx) {
  require_compatible(state, ctx.basis, "energy evaluation");
  require_dealiasing(ctx.grid, ctx.basis, ctx.nonlinearity.constants().p,
                     "energy evaluation");

  double curl2 = 0.0;
  double v_l2 = 0.0;
  for (Eigen::Index k = 0; k < state.divfree.size(); ++k) {
    const double vk2 = state.divfree[k] * state.divfree[k];
    curl2 += ctx.basis.divfree[static_cast<std::size_t>(k)].eigenvalue * vk2;
    v_l2 += vk2;
  }
  double w_grad2 = 0.0;
  for (Eigen::Index j = 0; j < state.gradient.size(); ++j) {
    w_grad2 += ctx.basis.gradient[static_cast<std::size_t>(j)].eigenvalue *
               state.gradient[j] * state.gradient[j];
  }

  EnergyBreakdown out;
  out.quad_curl = 0.5 * curl2;
  out.quad_lambda = 0.5 * ctx.lambda * (v_l2 + w_grad2);
  if (!ctx.nonlinearity.degenerate()) {
    out.potential =
        potential_integral(synthesize(state, ctx.basis, ctx.grid),
                           ctx.nonlinearity);
  }
  out.total = out.quad_curl + out.quad_lambda - out.potential;

  double nonplus = 0.0;
  for (int k : ctx.split.tilde_indices) {
    const double lam_k = ctx.basis.divfree[static_cast<std::size_t>(k)].eigenvalue;
    nonplus += (lam_k + ctx.lambda) * state.divfree[k] * state.divfree[k];
  }
  for (int k : ctx.split.kernel_indices) {
    const double lam_k = ctx.basis.divfree[static_cast<std::size_t>(k)].eigenvalue;
    nonplus += (lam_k + ctx.lambda) * state.divfree[k] * state.divfree[k];
  }
  out.I_value =
      -0.5 * nonplus - 0.5 * ctx.lambda * w_grad2 + out.potential;
  return out;
}

StateVector energy_gradient(const StateVector& state,
                            const EnergyContext& ctx) {
  require_compatible(state, ctx.basis, "energy gradient");
  require_dealiasing(ctx.grid, ctx.basis, ctx.nonlinearity.constants().p,
                     "energy gradient");

  StateVector pairing = StateVector::zero(ctx.basis);
  if (!ctx.nonlinearity.degenerate()) {
    // Overwrite the synthesized samples with f(x, E(x)); project then takes
    // the quadrature pairings against every basis field.
    GridField field = synthesize(state, ctx.basis, ctx.grid);
    const GridSpec& g = field.grid;
    for (int i3 = 0; i3 < g.resolution[2]; ++i3) {
      for (int i2 = 0; i2 < g.resolution[1]; ++i2) {
        for (int i1 = 0; i1 < g.resolution[0]; ++i1) {
          const Eigen::Index idx =
              static_cast<Eigen::Index>(g.flat(i1, i2, i3));
          field.values.col(idx) = ctx.nonlinearity.f(
              g.node(i1, i2, i3), Vec3(field.values.col(idx)));
        }
      }
    }
    pairing = project(field, ctx.basis);
  }

  StateVector grad = StateVector::zero(ctx.basis);
  for (Eigen::Index k = 0; k < state.divfree.size(); ++k) {
    const double lam_k =
        ctx.basis.divfree[static_cast<std::size_t>(k)].eigenvalue;
    grad.divfree[k] =
        (lam_k + ctx.lambda) * state.divfree[k] - pairing.divfree[k];
  }
  for (Eigen::Index j = 0; j < state.gradient.size(); ++j) {
    const double mu_j =
        ctx.basis.gradient[static_cast<std::size_t>(j)].eigenvalue;
    grad.gradient[j] =
        mu_j * (ctx.lambda * state.gradient[j] - pairing.gradient[j]);
  }
  return grad;
}

StateNorms compute_norms(const StateVector& state, const EnergyContext& ctx) {
  require_compatible(state, ctx.basis, "norm evaluation");
  StateNorms out;
  double curl2 = 0.0;
  double l2 = 0.0;
  for (Eigen::Index k = 0; k < state.divfree.size(); ++k) {
    const double vk2 = state.divfree[k] * state.divfree[k];
    curl2 += ctx.basis.divfree[static_cast<std::size_t>(k)].eigenvalue * vk2;
    l2 += vk2;
  }
  out.v_curl = std::sqrt(curl2);
  out.v_l2 = std::sqrt(l2);

  if (state.gradient.size() > 0 && state.gradient.squaredNorm() > 0.0) {
    StateVector grad_only = StateVector::zero(ctx.basis);
    grad_only.gradient = state.gradient;
    const GridField field = synthesize(grad_only, ctx.basis, ctx.grid);
    const GridSpec& g = field.grid;
    std::vector<double> terms(g.size());
    for (int i3 = 0; i3 < g.resolution[2]; ++i3) {
      for (int i2 = 0; i2 < g.resolution[1]; ++i2) {
        for (int i1 = 0; i1 < g.resolution[0]; ++i1) {
          const std::size_t idx = g.flat(i1, i2, i3);
          terms[idx] =
              g.weight(i1, i2, i3) *
              std::pow(field.values.col(static_cast<Eigen::Index>(idx)).norm(),
                       ctx.p_norm);
        }
      }
    }
    out.w_gradp = std::pow(pairwise_sum(terms), 1.0 / ctx.p_norm);
  }
  out.combined = std::hypot(out.v_curl, out.w_gradp);
  return out;
}

}  // namespace curlgs
