#include "curlgs/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "curlgs/errors.hpp"
#include "curlgs/quadrature.hpp"
#include "curlgs/transforms.hpp"

namespace curlgs {

namespace {

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tol_inner > 0.0) || !(cfg.tol_outer > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (!(cfg.linesearch.shrink > 0.0) || !(cfg.linesearch.shrink < 1.0)) {
    throw ConfigError("linesearch shrink factor must lie in (0, 1)");
  }
  if (!(cfg.linesearch.sufficient_decrease > 0.0) ||
      !(cfg.linesearch.sufficient_decrease < 1.0)) {
    throw ConfigError(
        "linesearch sufficient-decrease constant must lie in (0, 1)");
  }
  if (cfg.max_inner_iters < 1 || cfg.max_outer_iters < 1 ||
      cfg.restarts < 1) {
    throw ConfigError("iteration and restart counts must be positive");
  }
}

// The inner maximizer is well defined exactly when the superquadratic term
// is present and convex; a kernel block additionally needs strict convexity.
void require_convex_regime(const EnergyContext& ctx) {
  if (ctx.nonlinearity.degenerate()) {
    throw RegimeError(
        "inner maximization needs a superquadratic nonlinearity; with F = 0 "
        "the energy is unbounded along rays of the positive block");
  }
  if (ctx.split.needs_strict_convexity && !ctx.nonlinearity.certified()) {
    throw RegimeError(
        "the shifted quadratic form has a kernel at this lambda and the "
        "nonlinearity carries no strict-convexity certificate");
  }
}

// Dense cache of all basis fields sampled on the quadrature grid so that
// synthesis becomes one matrix-vector product. Columns follow the state
// layout: divfree modes in basis order, then gradient fields. Filled from
// the canonical synthesize() so both evaluation paths agree to rounding.
struct Workspace {
  const EnergyContext* ctx = nullptr;
  Eigen::MatrixXd basis_values;  // (3 * nodes) x ncoef
  Eigen::VectorXd node_weight;   // quadrature weight per node
  Eigen::Matrix3Xd node_x;       // node coordinates
  Eigen::VectorXd quad_diag;     // (lambda_k + lambda) resp. lambda * mu_j
  std::vector<int> plus_cols;    // columns of the positive block
  std::vector<int> slab_cols;    // tilde, kernel, then gradient columns
  int n_div = 0;
  int n_grad = 0;
  Eigen::Index n_nodes = 0;

  int ncoef() const { return n_div + n_grad; }
  int n_plus() const { return static_cast<int>(plus_cols.size()); }
  int n_slab() const { return static_cast<int>(slab_cols.size()); }
};

Workspace make_workspace(const EnergyContext& ctx) {
  Workspace ws;
  ws.ctx = &ctx;
  ws.n_div = static_cast<int>(ctx.basis.divfree.size());
  ws.n_grad = static_cast<int>(ctx.basis.gradient.size());
  ws.n_nodes = static_cast<Eigen::Index>(ctx.grid.size());

  const double bytes = 24.0 * static_cast<double>(ws.n_nodes) * ws.ncoef();
  if (bytes > 2e9) {
    throw RegimeError(
        "basis-grid sample cache exceeds the memory budget; reduce the "
        "cutoff or the grid resolution");
  }

  ws.basis_values.resize(3 * ws.n_nodes, ws.ncoef());
  for (int c = 0; c < ws.ncoef(); ++c) {
    StateVector unit = StateVector::zero(ctx.basis);
    if (c < ws.n_div) {
      unit.divfree[c] = 1.0;
    } else {
      unit.gradient[c - ws.n_div] = 1.0;
    }
    const GridField field = synthesize(unit, ctx.basis, ctx.grid);
    ws.basis_values.col(c) =
        Eigen::Map<const Eigen::VectorXd>(field.values.data(), 3 * ws.n_nodes);
  }

  ws.node_weight.resize(ws.n_nodes);
  ws.node_x.resize(3, ws.n_nodes);
  const GridSpec& g = ctx.grid;
  for (int i3 = 0; i3 < g.resolution[2]; ++i3) {
    for (int i2 = 0; i2 < g.resolution[1]; ++i2) {
      for (int i1 = 0; i1 < g.resolution[0]; ++i1) {
        const Eigen::Index idx = static_cast<Eigen::Index>(g.flat(i1, i2, i3));
        ws.node_weight[idx] = g.weight(i1, i2, i3);
        ws.node_x.col(idx) = g.node(i1, i2, i3);
      }
    }
  }

  ws.quad_diag.resize(ws.ncoef());
  for (int k = 0; k < ws.n_div; ++k) {
    ws.quad_diag[k] = ctx.basis.divfree[static_cast<std::size_t>(k)].eigenvalue +
                      ctx.lambda;
  }
  for (int j = 0; j < ws.n_grad; ++j) {
    ws.quad_diag[ws.n_div + j] =
        ctx.lambda * ctx.basis.gradient[static_cast<std::size_t>(j)].eigenvalue;
  }

  for (int k : ctx.split.plus_indices) ws.plus_cols.push_back(k);
  for (int k : ctx.split.tilde_indices) ws.slab_cols.push_back(k);
  for (int k : ctx.split.kernel_indices) ws.slab_cols.push_back(k);
  for (int j = 0; j < ws.n_grad; ++j) ws.slab_cols.push_back(ws.n_div + j);
  return ws;
}

double potential_of_field(const Workspace& ws, const Eigen::VectorXd& field,
                          std::vector<double>& terms) {
  terms.resize(static_cast<std::size_t>(ws.n_nodes));
  const NonlinearitySpec& nl = ws.ctx->nonlinearity;
  for (Eigen::Index n = 0; n < ws.n_nodes; ++n) {
    terms[static_cast<std::size_t>(n)] =
        ws.node_weight[n] *
        nl.F(ws.node_x.col(n), Vec3(field.segment<3>(3 * n)));
  }
  return pairwise_sum(terms);
}

// J at coefficients c, with the field buffer reused between calls.
double eval_value(const Workspace& ws, const Eigen::VectorXd& c,
                  Eigen::VectorXd& field, std::vector<double>& terms) {
  field.noalias() = ws.basis_values * c;
  const double quad = 0.5 * ws.quad_diag.cwiseProduct(c).dot(c);
  return quad - potential_of_field(ws, field, terms);
}

// J and its full coefficient gradient in one pass over the nodes.
double eval_value_gradient(const Workspace& ws, const Eigen::VectorXd& c,
                           Eigen::VectorXd& grad, Eigen::VectorXd& field,
                           Eigen::VectorXd& fvals,
                           std::vector<double>& terms) {
  field.noalias() = ws.basis_values * c;
  fvals.resize(3 * ws.n_nodes);
  terms.resize(static_cast<std::size_t>(ws.n_nodes));
  const NonlinearitySpec& nl = ws.ctx->nonlinearity;
  for (Eigen::Index n = 0; n < ws.n_nodes; ++n) {
    const Vec3 x = ws.node_x.col(n);
    const Vec3 u = field.segment<3>(3 * n);
    const double w = ws.node_weight[n];
    terms[static_cast<std::size_t>(n)] = w * nl.F(x, u);
    fvals.segment<3>(3 * n) = w * nl.f(x, u);
  }
  grad.noalias() = ws.quad_diag.cwiseProduct(c);
  grad.noalias() -= ws.basis_values.transpose() * fvals;
  return 0.5 * ws.quad_diag.cwiseProduct(c).dot(c) - pairwise_sum(terms);
}

// Reusable evaluation buffers.
struct Scratch {
  Eigen::VectorXd field;
  Eigen::VectorXd fvals;
  Eigen::VectorXd grad;
  std::vector<double> terms;
};

// Derivative of J along the ray direction at field = t * dir_field + base:
// h(t) = q_dir * t - <f(., u(t)), dir field>_quad. Cheap: no basis products.
double ray_slope(const Workspace& ws, double q_dir, double t,
                 const Eigen::VectorXd& dir_field,
                 const Eigen::VectorXd& base_field,
                 std::vector<double>& terms) {
  terms.resize(static_cast<std::size_t>(ws.n_nodes));
  const NonlinearitySpec& nl = ws.ctx->nonlinearity;
  for (Eigen::Index n = 0; n < ws.n_nodes; ++n) {
    const Vec3 u = t * dir_field.segment<3>(3 * n) + base_field.segment<3>(3 * n);
    terms[static_cast<std::size_t>(n)] =
        ws.node_weight[n] *
        nl.f(ws.node_x.col(n), u).dot(dir_field.segment<3>(3 * n));
  }
  return q_dir * t - pairwise_sum(terms);
}

// Maximizes t -> J(t * dir + fixed slab part) for t >= 0 starting the
// bracket hunt at t0 > 0. The slope is positive for small t whenever the
// running value is positive, so the bracket always closes in exact
// arithmetic; failures indicate a degenerate direction.
double solve_ray(const Workspace& ws, double q_dir,
                 const Eigen::VectorXd& dir_field,
                 const Eigen::VectorXd& base_field, double t0,
                 std::vector<double>& terms) {
  double lo = 0.0, hi = 0.0;
  double t = std::max(t0, 1e-12);
  double h = ray_slope(ws, q_dir, t, dir_field, base_field, terms);
  if (h > 0.0) {
    lo = t;
    for (int i = 0; i < 400 && h > 0.0; ++i) {
      t *= 2.0;
      h = ray_slope(ws, q_dir, t, dir_field, base_field, terms);
      if (h > 0.0) lo = t;
    }
    if (h > 0.0) {
      throw SolverError("ray maximization failed to bracket a stationary scale");
    }
    hi = t;
  } else if (h < 0.0) {
    hi = t;
    for (int i = 0; i < 2000 && h < 0.0; ++i) {
      t *= 0.5;
      if (t < 1e-300) {
        throw SolverError("direction leaves the admissible cone");
      }
      h = ray_slope(ws, q_dir, t, dir_field, base_field, terms);
      if (h < 0.0) hi = t;
    }
    if (h < 0.0) {
      throw SolverError("direction leaves the admissible cone");
    }
    lo = t;
  } else {
    return t;
  }

  // Bisection to a narrow interval, then Newton-style secant polish.
  double h_lo = ray_slope(ws, q_dir, lo, dir_field, base_field, terms);
  double h_hi = ray_slope(ws, q_dir, hi, dir_field, base_field, terms);
  for (int i = 0; i < 60 && (hi - lo) > 1e-4 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double hm = ray_slope(ws, q_dir, mid, dir_field, base_field, terms);
    if (hm > 0.0) {
      lo = mid;
      h_lo = hm;
    } else {
      hi = mid;
      h_hi = hm;
    }
  }
  double a = lo, b = hi, ha = h_lo, hb = h_hi;
  for (int i = 0; i < 40; ++i) {
    if (ha == hb) break;
    double s = a - ha * (b - a) / (hb - ha);
    if (!(s > lo) || !(s < hi)) s = 0.5 * (a + b);
    const double hs = ray_slope(ws, q_dir, s, dir_field, base_field, terms);
    a = b;
    ha = hb;
    b = s;
    hb = hs;
    const double scale = q_dir * b + 1.0;
    if (std::abs(hs) <= 1e-15 * scale || std::abs(b - a) <= 1e-15 * b) break;
  }
  return b;
}

// Inner maximization over the slab R+ dir (+) span(tilde, kernel, gradient).
// Alternates the scalar ray solve with concave gradient ascent on the slab
// block. Monotone in J; stops at joint stationarity relative to |J| + 1.
NehariPoint inner_solve(const Workspace& ws, const Eigen::VectorXd& dir_unit,
                        const SolverConfig& cfg, Scratch& s,
                        const NehariPoint* warm) {
  const EnergyContext& ctx = *ws.ctx;
  const int m = ws.n_slab();
  const int ncoef = ws.ncoef();

  Eigen::VectorXd dir_full = Eigen::VectorXd::Zero(ncoef);
  for (int i = 0; i < ws.n_plus(); ++i) {
    dir_full[ws.plus_cols[static_cast<std::size_t>(i)]] = dir_unit[i];
  }
  double q_dir = 0.0;
  for (int i = 0; i < ws.n_plus(); ++i) {
    const int col = ws.plus_cols[static_cast<std::size_t>(i)];
    q_dir += ws.quad_diag[col] * dir_unit[i] * dir_unit[i];
  }
  if (!(q_dir > 0.0)) {
    throw SolverError("direction leaves the admissible cone");
  }

  const Eigen::VectorXd dir_field = ws.basis_values * dir_full;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  double t = 1.0;
  if (warm != nullptr && warm->tilde.size() + warm->w.size() == m &&
      warm->t > 0.0) {
    for (Eigen::Index i = 0; i < warm->tilde.size(); ++i) z[i] = warm->tilde[i];
    for (Eigen::Index j = 0; j < warm->w.size(); ++j) {
      z[warm->tilde.size() + j] = warm->w[j];
    }
    t = warm->t;
  }

  Eigen::VectorXd c = Eigen::VectorXd::Zero(ncoef);
  Eigen::VectorXd base_field = Eigen::VectorXd::Zero(3 * ws.n_nodes);
  auto assemble = [&](double tt, const Eigen::VectorXd& zz) {
    c = tt * dir_full;
    for (int i = 0; i < m; ++i) c[ws.slab_cols[static_cast<std::size_t>(i)]] += zz[i];
  };

  // Base field from the slab part only; updated whenever z changes.
  auto refresh_base = [&]() {
    Eigen::VectorXd slab_only = Eigen::VectorXd::Zero(ncoef);
    for (int i = 0; i < m; ++i) {
      slab_only[ws.slab_cols[static_cast<std::size_t>(i)]] = z[i];
    }
    base_field.noalias() = ws.basis_values * slab_only;
  };

  refresh_base();

  double eta = 1.0;
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
  Eigen::VectorXd g_slab(m), z_trial(m);

  // Stationarity map on (t, slab): the ray slope and the slab gradient.
  // Returns the max-norm residual used for the joint convergence test and
  // leaves the value of J in `value`.
  Eigen::VectorXd G(1 + m), G_probe(1 + m);
  auto stationarity = [&](double tt, const Eigen::VectorXd& zz,
                          Eigen::VectorXd& out) -> double {
    c = tt * dir_full;
    for (int i = 0; i < m; ++i) {
      c[ws.slab_cols[static_cast<std::size_t>(i)]] += zz[i];
    }
    value = eval_value_gradient(ws, c, s.grad, s.field, s.fvals, s.terms);
    double ray_component = 0.0;
    for (int i = 0; i < ws.n_plus(); ++i) {
      ray_component +=
          dir_unit[i] * s.grad[ws.plus_cols[static_cast<std::size_t>(i)]];
    }
    out[0] = ray_component;
    double slab_max = 0.0;
    for (int i = 0; i < m; ++i) {
      out[1 + i] = s.grad[ws.slab_cols[static_cast<std::size_t>(i)]];
      slab_max = std::max(slab_max, std::abs(out[1 + i]));
    }
    const double self = s.grad.dot(c);
    return std::max({std::abs(self), slab_max, tt * std::abs(ray_component)});
  };

  for (int round = 0; round < cfg.max_inner_iters; ++round) {
    // Scalar ray solve against the current slab part.
    t = solve_ray(ws, q_dir, dir_field, base_field, t, s.terms);

    // Concave backtracking ascent on the slab block at fixed t.
    bool slab_moved = false;
    if (m > 0) {
      for (int sub = 0; sub < 40; ++sub) {
        assemble(t, z);
        value = eval_value_gradient(ws, c, s.grad, s.field, s.fvals, s.terms);
        double slab_max = 0.0;
        for (int i = 0; i < m; ++i) {
          g_slab[i] = s.grad[ws.slab_cols[static_cast<std::size_t>(i)]];
          slab_max = std::max(slab_max, std::abs(g_slab[i]));
        }
        if (slab_max <= 0.3 * cfg.tol_inner * (1.0 + std::abs(value))) break;

        const double g2 = g_slab.squaredNorm();
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
          z_trial = z + eta * g_slab;
          assemble(t, z_trial);
          const double trial = eval_value(ws, c, s.field, s.terms);
          if (trial >= value + cfg.linesearch.sufficient_decrease * eta * g2) {
            z = z_trial;
            value = trial;
            eta = std::min(eta * 1.5, 1e6);
            moved = true;
            slab_moved = true;
            break;
          }
          eta *= cfg.linesearch.shrink;
          if (eta < 1e-18) break;
        }
        if (!moved) break;
      }
      if (slab_moved) refresh_base();
    }

    // Joint stationarity at the current iterate.
    residual = stationarity(t, z, G);
    if (residual <= cfg.tol_inner * (1.0 + std::abs(value))) {
      converged = true;
      break;
    }

    // The alternation couples the ray scale to the slab only linearly; once
    // it has localized the maximizer, polish with Newton on the joint
    // stationarity map (Jacobian by forward differences, residual-decrease
    // line search). Falls back to more alternation if the model is poor.
    if (m > 0 && residual <= 1e-2 * (1.0 + std::abs(value))) {
      Eigen::MatrixXd H(1 + m, 1 + m);
      Eigen::VectorXd y(1 + m), y_trial(1 + m);
      y[0] = t;
      y.tail(m) = z;
      for (int newton = 0; newton < 30; ++newton) {
        for (int j = 0; j < 1 + m; ++j) {
          const double delta = 1e-6 * (1.0 + std::abs(y[j]));
          Eigen::VectorXd y_probe = y;
          y_probe[j] += delta;
          stationarity(y_probe[0], y_probe.tail(m), G_probe);
          H.col(j) = (G_probe - G) / delta;
        }
        const Eigen::VectorXd step = H.partialPivLu().solve(-G);
        if (!step.allFinite()) break;

        double alpha = 1.0;
        bool accepted = false;
        const double g_now = G.cwiseAbs().maxCoeff();
        for (int ls = 0; ls < 10; ++ls) {
          y_trial = y + alpha * step;
          if (y_trial[0] > 0.0) {
            const double res_trial =
                stationarity(y_trial[0], y_trial.tail(m), G_probe);
            if (G_probe.cwiseAbs().maxCoeff() <= (1.0 - 0.25 * alpha) * g_now) {
              y = y_trial;
              G = G_probe;
              residual = res_trial;
              accepted = true;
              break;
            }
          }
          alpha *= 0.5;
        }
        if (!accepted) break;
        if (residual <= cfg.tol_inner * (1.0 + std::abs(value))) {
          converged = true;
          break;
        }
      }
      t = y[0];
      z = y.tail(m);
      refresh_base();
      if (converged) {
        // Refresh value and gradient buffers at the accepted point.
        residual = stationarity(t, z, G);
        break;
      }
    }
  }

  if (!converged) {
    std::ostringstream msg;
    msg << "inner maximization did not converge within " << cfg.max_inner_iters
        << " rounds (last residual " << residual << ")";
    throw SolverError(msg.str());
  }

  NehariPoint point;
  point.direction = dir_unit;
  point.t = t;
  const int n_neg = static_cast<int>(ctx.split.tilde_indices.size() +
                                     ctx.split.kernel_indices.size());
  point.tilde = z.head(n_neg);
  point.w = z.tail(ws.n_grad);
  point.value = value;
  point.inner_residual = residual;
  return point;
}

Eigen::VectorXd normalized_direction(const Eigen::VectorXd& direction,
                                     int n_plus) {
  if (direction.size() != n_plus) {
    throw StructuralError(
        "direction length does not match the positive block dimension");
  }
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ConfigError("direction must be a nonzero finite vector");
  }
  return direction / norm;
}

// Sphere-tangential gradient of the reduced value at a converged inner
// point: t times the tangential positive-block components of J'(state).
Eigen::VectorXd reduced_gradient(const Workspace& ws, const NehariPoint& p,
                                 Scratch& s) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ws.ncoef());
  for (int i = 0; i < ws.n_plus(); ++i) {
    c[ws.plus_cols[static_cast<std::size_t>(i)]] = p.t * p.direction[i];
  }
  for (int i = 0; i < ws.n_slab(); ++i) {
    const int col = ws.slab_cols[static_cast<std::size_t>(i)];
    c[col] = i < p.tilde.size() ? p.tilde[i] : p.w[i - p.tilde.size()];
  }
  eval_value_gradient(ws, c, s.grad, s.field, s.fvals, s.terms);
  Eigen::VectorXd g_plus(ws.n_plus());
  for (int i = 0; i < ws.n_plus(); ++i) {
    g_plus[i] = s.grad[ws.plus_cols[static_cast<std::size_t>(i)]];
  }
  g_plus -= g_plus.dot(p.direction) * p.direction;
  return p.t * g_plus;
}

Eigen::VectorXd random_start(std::mt19937_64& rng, const Workspace& ws,
                             bool biased) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(ws.n_plus());
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (int i = 0; i < ws.n_plus(); ++i) {
      double x = u(rng);
      if (biased) {
        const int col = ws.plus_cols[static_cast<std::size_t>(i)];
        x /= ws.ctx->basis.divfree[static_cast<std::size_t>(col)].eigenvalue;
      }
      v[i] = x;
    }
    const double n = v.norm();
    if (n > 1e-8) return v / n;
  }
  throw SolverError("failed to draw a random start direction");
}

}  // namespace

StateVector assemble_state(const NehariPoint& point, const EnergyContext& ctx) {
  StateVector state = StateVector::zero(ctx.basis);
  const auto& split = ctx.split;
  if (point.direction.size() !=
          static_cast<Eigen::Index>(split.plus_indices.size()) ||
      point.tilde.size() != static_cast<Eigen::Index>(
                                split.tilde_indices.size() +
                                split.kernel_indices.size()) ||
      point.w.size() != state.gradient.size()) {
    throw StructuralError("point block sizes do not match the context");
  }
  for (std::size_t i = 0; i < split.plus_indices.size(); ++i) {
    state.divfree[split.plus_indices[i]] =
        point.t * point.direction[static_cast<Eigen::Index>(i)];
  }
  Eigen::Index pos = 0;
  for (int k : split.tilde_indices) state.divfree[k] = point.tilde[pos++];
  for (int k : split.kernel_indices) state.divfree[k] = point.tilde[pos++];
  state.gradient = point.w;
  return state;
}

NehariPoint inner_maximize(const Eigen::VectorXd& direction,
                           const EnergyContext& ctx, const SolverConfig& cfg) {
  validate_config(cfg);
  require_convex_regime(ctx);
  const Workspace ws = make_workspace(ctx);
  if (ws.n_plus() == 0) {
    throw RegimeError(
        "the positive spectral block is empty at this cutoff; enlarge the "
        "basis or raise lambda");
  }
  const Eigen::VectorXd dir = normalized_direction(direction, ws.n_plus());
  Scratch s;
  return inner_solve(ws, dir, cfg, s, nullptr);
}

NehariResidual nehari_residual(const StateVector& state,
                               const EnergyContext& ctx) {
  const StateVector grad = energy_gradient(state, ctx);
  NehariResidual out;
  out.self_pairing =
      grad.divfree.dot(state.divfree) + grad.gradient.dot(state.gradient);
  double tilde = 0.0;
  for (int k : ctx.split.tilde_indices) {
    tilde = std::max(tilde, std::abs(grad.divfree[k]));
  }
  for (int k : ctx.split.kernel_indices) {
    tilde = std::max(tilde, std::abs(grad.divfree[k]));
  }
  for (Eigen::Index j = 0; j < grad.gradient.size(); ++j) {
    tilde = std::max(tilde, std::abs(grad.gradient[j]));
  }
  out.tilde_residual = tilde;
  return out;
}

SolverReport ground_state(const EnergyContext& ctx, const SolverConfig& cfg) {
  validate_config(cfg);
  require_convex_regime(ctx);
  const Workspace ws = make_workspace(ctx);
  if (ws.n_plus() == 0) {
    throw RegimeError(
        "the positive spectral block is empty at this cutoff; enlarge the "
        "basis or raise lambda");
  }
  Scratch s;

  struct RestartOutcome {
    bool converged = false;
    double value = 0.0;
    double residual = 0.0;
    double t = 0.0;
    NehariPoint point;
    std::vector<PsRecord> history;
  };
  std::vector<RestartOutcome> outcomes;
  std::vector<std::string> warnings;

  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(cfg.seed * 6364136223846793005ULL +
                        1442695040888963407ULL * static_cast<std::uint64_t>(r + 1));
    RestartOutcome out;
    try {
      Eigen::VectorXd u = random_start(rng, ws, r % 2 == 0);

      NehariPoint point = inner_solve(ws, u, cfg, s, nullptr);
      const double initial_scale = point.t + point.tilde.norm() + point.w.norm();
      double eta = 1.0;
      for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
        const Eigen::VectorXd g = reduced_gradient(ws, point, s);
        const double gnorm = g.norm();
        out.history.push_back(PsRecord{point.value, gnorm});
        if (gnorm <= cfg.tol_outer) {
          out.converged = true;
          out.residual = gnorm;
          break;
        }
        const double scale_now = point.t + point.tilde.norm() + point.w.norm();
        if (scale_now > 1e6 * (1.0 + initial_scale)) {
          warnings.push_back(
              "restart aborted: iterate norms grew without bound (no "
              "discrete compactness)");
          break;
        }

        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
          Eigen::VectorXd u_trial = u - eta * g;
          const double n = u_trial.norm();
          if (!(n > 1e-14)) {
            eta *= cfg.linesearch.shrink;
            continue;
          }
          u_trial /= n;
          NehariPoint trial;
          try {
            trial = inner_solve(ws, u_trial, cfg, s, &point);
          } catch (const SolverError&) {
            eta *= cfg.linesearch.shrink;
            continue;  // treat an unprojectable trial as a rejected step
          }
          if (trial.value <= point.value -
                                 cfg.linesearch.sufficient_decrease * eta *
                                     gnorm * gnorm) {
            u = u_trial;
            point = trial;
            eta = std::min(eta * 1.5, 1e3);
            accepted = true;
            break;
          }
          eta *= cfg.linesearch.shrink;
          if (eta < 1e-16) break;
        }
        if (!accepted) {
          out.residual = gnorm;
          break;  // stalled; gnorm recorded for diagnostics
        }
      }
      out.value = point.value;
      out.t = point.t;
      out.point = point;
    } catch (const SolverError& err) {
      warnings.push_back(std::string("restart failed: ") + err.what());
      out.converged = false;
    }
    outcomes.push_back(std::move(out));
  }

  int best = -1;
  double vmin = 0.0, vmax = 0.0, tmin = 0.0;
  int converged = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const RestartOutcome& o = outcomes[i];
    if (!o.converged) continue;
    if (converged == 0) {
      vmin = vmax = o.value;
      tmin = o.t;
    } else {
      vmin = std::min(vmin, o.value);
      vmax = std::max(vmax, o.value);
      tmin = std::min(tmin, o.t);
    }
    ++converged;
    if (best < 0 || o.value < outcomes[static_cast<std::size_t>(best)].value) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    std::ostringstream msg;
    msg << "no restart converged; residuals:";
    for (const RestartOutcome& o : outcomes) msg << ' ' << o.residual;
    throw SolverError(msg.str());
  }

  const RestartOutcome& win = outcomes[static_cast<std::size_t>(best)];
  SolverReport report;
  report.state = assemble_state(win.point, ctx);
  report.c0 = evaluate_energy(report.state, ctx).total;
  report.outer_residual = win.residual;
  report.ps_history = win.history;
  report.multistart_spread = vmax - vmin;
  report.plus_norm = tmin;
  report.converged_restarts = converged;
  report.warnings = std::move(warnings);
  if (report.multistart_spread >
      10.0 * cfg.tol_outer * (1.0 + std::abs(report.c0))) {
    report.warnings.push_back("possible multiple local minimizers of J∘m");
  }
  if (!(report.c0 > 0.0)) {
    throw SolverError(
        "converged to a nonpositive constrained value; the reduction "
        "geometry is violated");
  }

  const StateVector grad = energy_gradient(report.state, ctx);
  double el = 0.0;
  for (Eigen::Index k = 0; k < grad.divfree.size(); ++k) {
    el = std::max(el, std::abs(grad.divfree[k]));
  }
  for (Eigen::Index j = 0; j < grad.gradient.size(); ++j) {
    const double mu =
        ctx.basis.gradient[static_cast<std::size_t>(j)].eigenvalue;
    el = std::max(el, std::abs(grad.gradient[j]) / std::sqrt(mu));
  }
  report.el_residual = el;
  return report;
}

namespace {

// Generic joint projected-gradient ascent over (t, slab), independent of the
// alternating scheme: small adaptive steps, long budget, first-order KKT
// stationarity on the cone t >= 0.
struct IndependentPoint {
  double t = 0.0;
  Eigen::VectorXd z;
  double value = 0.0;
};

IndependentPoint independent_inner(const Workspace& ws,
                                   const Eigen::VectorXd& dir_unit,
                                   double t_init, const Eigen::VectorXd& z_init,
                                   double tol, Scratch& s) {
  const int m = ws.n_slab();
  Eigen::VectorXd dir_full = Eigen::VectorXd::Zero(ws.ncoef());
  for (int i = 0; i < ws.n_plus(); ++i) {
    dir_full[ws.plus_cols[static_cast<std::size_t>(i)]] = dir_unit[i];
  }

  double t = std::max(t_init, 1e-8);
  Eigen::VectorXd z = z_init;
  Eigen::VectorXd c(ws.ncoef()), c_trial(ws.ncoef());
  auto assemble = [&](double tt, const Eigen::VectorXd& zz,
                      Eigen::VectorXd& out) {
    out = tt * dir_full;
    for (int i = 0; i < m; ++i) {
      out[ws.slab_cols[static_cast<std::size_t>(i)]] += zz[i];
    }
  };

  assemble(t, z, c);
  double value = eval_value_gradient(ws, c, s.grad, s.field, s.fvals, s.terms);
  double eta = 1e-3;
  Eigen::VectorXd z_trial(m);
  for (int iter = 0; iter < 6000; ++iter) {
    double g_t = 0.0;
    for (int i = 0; i < ws.n_plus(); ++i) {
      g_t += dir_unit[i] * s.grad[ws.plus_cols[static_cast<std::size_t>(i)]];
    }
    double res = (t > 1e-12) ? std::abs(g_t) : std::max(g_t, 0.0);
    for (int i = 0; i < m; ++i) {
      res = std::max(
          res, std::abs(s.grad[ws.slab_cols[static_cast<std::size_t>(i)]]));
    }
    if (res <= tol * (1.0 + std::abs(value))) break;

    const double t_trial = std::max(t + eta * g_t, 0.0);
    for (int i = 0; i < m; ++i) {
      z_trial[i] = z[i] + eta * s.grad[ws.slab_cols[static_cast<std::size_t>(i)]];
    }
    assemble(t_trial, z_trial, c_trial);
    const double trial = eval_value(ws, c_trial, s.field, s.terms);
    if (trial > value) {
      t = t_trial;
      z = z_trial;
      value = trial;
      eta *= 1.6;
      assemble(t, z, c);
      eval_value_gradient(ws, c, s.grad, s.field, s.fvals, s.terms);
    } else {
      eta *= 0.4;
      if (eta < 1e-18) break;
    }
  }
  IndependentPoint out;
  out.t = t;
  out.z = z;
  out.value = value;
  return out;
}

// Coarse scan of J(t * dir) over a log-spaced grid: start for the ascent.
double coarse_ray_argmax(const Workspace& ws, const Eigen::VectorXd& dir_unit,
                         Scratch& s) {
  Eigen::VectorXd dir_full = Eigen::VectorXd::Zero(ws.ncoef());
  for (int i = 0; i < ws.n_plus(); ++i) {
    dir_full[ws.plus_cols[static_cast<std::size_t>(i)]] = dir_unit[i];
  }
  Eigen::VectorXd c(ws.ncoef());
  double best_t = 1.0;
  double best_v = -1e300;
  for (int i = -12; i <= 12; ++i) {
    const double t = std::pow(2.0, 0.75 * i);
    c = t * dir_full;
    const double v = eval_value(ws, c, s.field, s.terms);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace

OracleResult oracle_dense(const EnergyContext& ctx, const SolverConfig& cfg) {
  validate_config(cfg);
  require_convex_regime(ctx);
  const int dim = static_cast<int>(ctx.basis.divfree.size() +
                                   ctx.basis.gradient.size());
  if (dim > 12) {
    throw RegimeError(
        "the dense oracle is restricted to at most 12 coefficients");
  }
  const Workspace ws = make_workspace(ctx);
  if (ws.n_plus() == 0) {
    throw RegimeError(
        "the positive spectral block is empty at this cutoff; enlarge the "
        "basis or raise lambda");
  }
  const int m = ws.n_slab();
  Scratch s;
  std::mt19937_64 rng(cfg.seed ^ 0x517cc1b727220a95ULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  const int n_directions = 200;
  std::vector<Eigen::VectorXd> dirs;
  std::vector<double> theta(static_cast<std::size_t>(n_directions));
  std::vector<IndependentPoint> best_points(
      static_cast<std::size_t>(n_directions));
  double max_spread = 0.0;

  for (int d = 0; d < n_directions; ++d) {
    Eigen::VectorXd v(ws.n_plus());
    do {
      for (int i = 0; i < ws.n_plus(); ++i) v[i] = unit(rng);
    } while (v.norm() < 1e-8);
    v.normalize();
    dirs.push_back(v);

    const double t0 = coarse_ray_argmax(ws, v, s);
    Eigen::VectorXd z0 = Eigen::VectorXd::Zero(m);
    const IndependentPoint a = independent_inner(ws, v, 0.5 * t0, z0, 1e-9, s);
    for (int i = 0; i < m; ++i) z0[i] = 0.2 * t0 * unit(rng);
    const IndependentPoint b = independent_inner(ws, v, 1.9 * t0, z0, 1e-9, s);

    const double spread =
        std::abs(a.value - b.value) /
        (1.0 + std::max(std::abs(a.value), std::abs(b.value)));
    max_spread = std::max(max_spread, spread);
    const IndependentPoint& win = a.value >= b.value ? a : b;
    theta[static_cast<std::size_t>(d)] = win.value;
    best_points[static_cast<std::size_t>(d)] = win;
  }

  // Polish the best directions by finite-difference descent on the sphere,
  // warm-starting each inner ascent from the neighboring solution.
  std::vector<int> order(static_cast<std::size_t>(n_directions));
  for (int i = 0; i < n_directions; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return theta[static_cast<std::size_t>(a)] <
                                       theta[static_cast<std::size_t>(b)]; });

  double best_value = 1e300;
  Eigen::VectorXd best_dir;
  IndependentPoint best_point;

  // Descent starts: the two best values plus starts spread over the sphere
  // (greedy max-min separation in the sign-invariant metric). A narrow
  // global basin whose sampled values rank poorly still gets a descent
  // started inside its gradient-flow attraction region.
  const int pool = std::min(60, n_directions);
  const int n_polish = std::min(8, pool);
  std::vector<int> chosen;
  chosen.push_back(order[0]);
  if (pool > 1) chosen.push_back(order[1]);
  while (static_cast<int>(chosen.size()) < n_polish) {
    int pick = -1;
    double best_sep = -1.0;
    for (int q = 0; q < pool; ++q) {
      const int cand = order[static_cast<std::size_t>(q)];
      if (std::find(chosen.begin(), chosen.end(), cand) != chosen.end()) {
        continue;
      }
      double sep = 1e300;
      for (int c : chosen) {
        const double dot = dirs[static_cast<std::size_t>(cand)].dot(
            dirs[static_cast<std::size_t>(c)]);
        sep = std::min(sep, 1.0 - dot * dot);
      }
      if (sep > best_sep) {
        best_sep = sep;
        pick = cand;
      }
    }
    if (pick < 0) break;
    chosen.push_back(pick);
  }

  for (int start : chosen) {
    Eigen::VectorXd d = dirs[static_cast<std::size_t>(start)];
    IndependentPoint warm = best_points[static_cast<std::size_t>(start)];
    warm = independent_inner(ws, d, warm.t, warm.z, 1e-12, s);
    double val = warm.value;

    auto theta_at = [&](const Eigen::VectorXd& dd,
                        IndependentPoint& carry) -> double {
      const IndependentPoint r =
          independent_inner(ws, dd, carry.t, carry.z, 1e-12, s);
      carry = r;
      return r.value;
    };

    // Finite-difference descent over the direction sphere. The step is
    // persistent and adaptive so the iterate can traverse shallow regions
    // toward a distant funnel instead of only polishing near its start.
    const double h = 1e-4;
    double step = 0.5;
    for (int iter = 0; iter < 300 && ws.n_plus() > 1; ++iter) {
      Eigen::VectorXd g(ws.n_plus());
      for (int i = 0; i < ws.n_plus(); ++i) {
        Eigen::VectorXd dp = d, dm = d;
        dp[i] += h;
        dm[i] -= h;
        dp.normalize();
        dm.normalize();
        IndependentPoint cp = warm, cm = warm;
        g[i] = (theta_at(dp, cp) - theta_at(dm, cm)) / (2.0 * h);
      }
      g -= g.dot(d) * d;
      const double gnorm = g.norm();
      if (gnorm <= 1e-7 * (1.0 + std::abs(val))) break;

      bool ok = false;
      for (int ls = 0; ls < 40; ++ls) {
        Eigen::VectorXd d_trial = (d - step * g).normalized();
        IndependentPoint carry = warm;
        const double v_trial = theta_at(d_trial, carry);
        if (v_trial < val - 1e-4 * std::min(step, 1.0) * gnorm * gnorm) {
          d = d_trial;
          val = v_trial;
          warm = carry;
          ok = true;
          step = std::min(step * 1.5, 1e3);
          break;
        }
        step *= 0.5;
        if (step < 1e-12) break;
      }
      if (!ok) break;
    }
    if (val < best_value) {
      best_value = val;
      best_dir = d;
      best_point = warm;
    }
  }

  OracleResult out;
  out.c0_oracle = best_value;
  out.max_cluster_spread = max_spread;
  out.n_directions = n_directions;

  StateVector state = StateVector::zero(ctx.basis);
  for (int i = 0; i < ws.n_plus(); ++i) {
    state.divfree[ws.plus_cols[static_cast<std::size_t>(i)]] =
        best_point.t * best_dir[i];
  }
  for (int i = 0; i < m; ++i) {
    const int col = ws.slab_cols[static_cast<std::size_t>(i)];
    if (col < ws.n_div) {
      state.divfree[col] = best_point.z[i];
    } else {
      state.gradient[col - ws.n_div] = best_point.z[i];
    }
  }
  out.state = std::move(state);
  return out;
}

}  // namespace curlgs
