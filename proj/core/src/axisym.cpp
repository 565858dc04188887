#include "curlgs/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "curlgs/errors.hpp"

namespace curlgs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_solver_config(const SolverConfig& cfg) {
  if (!(cfg.tol_inner > 0.0) || !(cfg.tol_outer > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (cfg.max_inner_iters < 1 || cfg.max_outer_iters < 1) {
    throw ConfigError("iteration limits must be at least 1");
  }
  if (!(cfg.linesearch.shrink > 0.0) || !(cfg.linesearch.shrink < 1.0)) {
    throw ConfigError("linesearch shrink must lie in (0, 1)");
  }
  if (!(cfg.linesearch.sufficient_decrease > 0.0) ||
      !(cfg.linesearch.sufficient_decrease < 1.0)) {
    throw ConfigError("sufficient decrease must lie in (0, 1)");
  }
  if (cfg.restarts < 1) {
    throw ConfigError("at least one restart is required");
  }
}

Vec3 meridian_point(const MeridianGrid& grid, int i, int j, double theta) {
  const double r = grid.r(i);
  return Vec3(r * std::cos(theta), r * std::sin(theta), grid.z(j));
}

// Samples a coefficient over the meridian nodes at several azimuths and at
// the z-mirrored nodes, to certify axisymmetry and detect z-symmetry.
void check_coefficient_symmetries(const CoefficientField& gamma,
                                  const MeridianGrid& grid,
                                  bool& z_symmetric) {
  if (gamma.is_constant()) return;
  const double tol = 1e-12;
  for (int i = 0; i < grid.nr; ++i) {
    for (int j = 1; j < grid.nz; ++j) {
      const double base = gamma(meridian_point(grid, i, j, 0.0));
      for (double theta : {2.399, 4.153}) {
        const double rotated = gamma(meridian_point(grid, i, j, theta));
        if (std::abs(rotated - base) > tol * (1.0 + std::abs(base))) {
          throw RegimeError(
              "coefficient is not axisymmetric; the symmetric ansatz "
              "requires condition (S)");
        }
      }
      const Vec3 mirrored(grid.r(i), 0.0, grid.height - grid.z(j));
      if (std::abs(gamma(mirrored) - base) > tol * (1.0 + std::abs(base))) {
        z_symmetric = false;
      }
    }
  }
}

// Sector embedding: columns map reduced coordinates to full profiles that
// satisfy the parity constraint about z = H/2. The identity for Sector::all.
Eigen::SparseMatrix<double> sector_embedding(const MeridianGrid& grid,
                                             Sector sector) {
  const int n = grid.unknowns();
  std::vector<Eigen::Triplet<double>> trips;
  int cols = 0;
  if (sector == Sector::all) {
    for (int k = 0; k < n; ++k) trips.emplace_back(k, k, 1.0);
    cols = n;
  } else {
    const double sign = sector == Sector::even_z ? 1.0 : -1.0;
    for (int j = 1; j < grid.nz; ++j) {
      const int jm = grid.nz - j;
      if (j > jm) continue;
      if (j == jm && sector == Sector::odd_z) continue;  // forced zero
      for (int i = 0; i < grid.nr; ++i) {
        trips.emplace_back(grid.index(i, j), cols, 1.0);
        if (jm != j) trips.emplace_back(grid.index(i, jm), cols, sign);
        ++cols;
      }
    }
  }
  Eigen::SparseMatrix<double> S(n, cols);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

// Nonlinear potential P(alpha) = sum_ij weight_ij F(x_ij, r_i |alpha_ij|)
// and its directional structures, evaluated on full profiles.
double potential_value(const Eigen::VectorXd& alpha, const AxisymContext& ctx) {
  if (ctx.nonlinearity.degenerate()) return 0.0;
  double sum = 0.0;
  for (int n = 0; n < alpha.size(); ++n) {
    const double s = ctx.radius_at[n] * std::abs(alpha[n]);
    sum += ctx.weight[n] *
           ctx.nonlinearity.radial_F(ctx.node_x[static_cast<std::size_t>(n)], s);
  }
  return sum;
}

// Gradient of P: weight_ij g(x, r|alpha|) r^2 alpha per node.
void potential_gradient(const Eigen::VectorXd& alpha, const AxisymContext& ctx,
                        Eigen::VectorXd& out) {
  out.setZero(alpha.size());
  if (ctx.nonlinearity.degenerate()) return;
  for (int n = 0; n < alpha.size(); ++n) {
    const double r = ctx.radius_at[n];
    const double s = r * std::abs(alpha[n]);
    const double slope = ctx.nonlinearity.radial_slope(
        ctx.node_x[static_cast<std::size_t>(n)], s);
    out[n] = ctx.weight[n] * slope * r * r * alpha[n];
  }
}

// Curvature of the potential along the field magnitude: d/ds [s g(x, s)],
// where g is the radial slope with f(x, u) = g(x, |u|) u. Taken by central
// differences so no extra derivative needs to be exposed by the spec.
double potential_curvature(const NonlinearitySpec& nl, const Vec3& x,
                           double s) {
  const double h = 1e-6 * (1.0 + s);
  const double sp = s + h;
  const double sm = s > h ? s - h : 0.0;
  const double hp = sp * nl.radial_slope(x, sp);
  const double hm = sm > 0.0 ? sm * nl.radial_slope(x, sm) : 0.0;
  return (hp - hm) / (sp - sm);
}

// Ray stationarity gap for a direction with alpha' quad alpha = 1: the
// derivative of t -> J(t alpha) is t (1 - sum weight g(x, t r |alpha|)
// r^2 alpha^2), so the nontrivial stationary scale solves gap(t) = 0 with
// gap(t) = sum weight g(t r |alpha|) r^2 alpha^2 - 1, which increases in t
// from -1 for a superquadratic nonlinearity.
double ray_gap(double t, const Eigen::VectorXd& alpha,
               const AxisymContext& ctx) {
  double pairing = 0.0;
  for (int n = 0; n < alpha.size(); ++n) {
    if (alpha[n] == 0.0) continue;
    const double r = ctx.radius_at[n];
    const double s = t * r * std::abs(alpha[n]);
    const double slope = ctx.nonlinearity.radial_slope(
        ctx.node_x[static_cast<std::size_t>(n)], s);
    pairing += ctx.weight[n] * slope * r * r * alpha[n] * alpha[n];
  }
  return pairing - 1.0;
}

// Positive root of the ray equation: bracket by doubling or halving, then an
// Illinois-type regula falsi that never leaves the bracket.
double solve_ray(const Eigen::VectorXd& alpha, const AxisymContext& ctx,
                 double t_init) {
  double hi = std::max(t_init, 1e-12);
  double h_hi = ray_gap(hi, alpha, ctx);
  int guard = 0;
  while (h_hi < 0.0) {
    hi *= 2.0;
    h_hi = ray_gap(hi, alpha, ctx);
    if (++guard > 400) {
      throw SolverError("ray maximization failed to bracket a stationary "
                        "scale");
    }
  }
  double lo = 0.5 * hi;
  double h_lo = ray_gap(lo, alpha, ctx);
  while (h_lo > 0.0) {
    hi = lo;
    h_hi = h_lo;
    lo *= 0.5;
    if (lo < 1e-300) {
      throw SolverError("direction leaves the admissible cone");
    }
    h_lo = ray_gap(lo, alpha, ctx);
  }

  int side = 0;
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
    const double denom = h_hi - h_lo;
    double mid = denom != 0.0 ? (lo * h_hi - hi * h_lo) / denom
                              : 0.5 * (lo + hi);
    if (!(mid > lo) || !(mid < hi)) mid = 0.5 * (lo + hi);
    const double h_mid = ray_gap(mid, alpha, ctx);
    if (h_mid == 0.0) return mid;
    if (h_mid < 0.0) {
      lo = mid;
      h_lo = h_mid;
      if (side == -1) h_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      h_hi = h_mid;
      if (side == 1) h_lo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

struct SectorWorkspace {
  const AxisymContext* ctx = nullptr;
  Eigen::SparseMatrix<double> S;       // reduced -> full embedding
  Eigen::SparseMatrix<double> quad_s;  // sector-restricted quadratic form
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

// Reduced value and constraint scale for a unit direction (quadratic norm 1
// in the sector metric). Returns the value of J at the Nehari point.
double theta_value(const SectorWorkspace& ws, const Eigen::VectorXd& u,
                   double& t, Eigen::VectorXd& alpha_full) {
  alpha_full.noalias() = ws.S * u;
  t = solve_ray(alpha_full, *ws.ctx, t);
  return 0.5 * t * t - potential_value(t * alpha_full, *ws.ctx);
}

}  // namespace

MeridianGrid make_meridian_grid(const CylinderDomain& domain, int nr, int nz) {
  if (nr < 2 || nz < 2) {
    throw ConfigError("meridian grid needs at least two cells per axis");
  }
  MeridianGrid grid;
  grid.radius = domain.radius;
  grid.height = domain.height;
  grid.nr = nr;
  grid.nz = nz;
  return grid;
}

AxisymContext make_axisym_context(const MeridianGrid& grid, double lambda,
                                  NonlinearitySpec nonlinearity) {
  if (grid.nr < 2 || grid.nz < 2 || !(grid.radius > 0.0) ||
      !(grid.height > 0.0)) {
    throw ConfigError("meridian grid is not initialized");
  }
  if (!nonlinearity.is_radial()) {
    throw RegimeError(
        "nonlinearity is not radial in u; the symmetric ansatz requires "
        "condition (S)");
  }
  bool z_symmetric = true;
  for (const PowerTerm& term : nonlinearity.terms()) {
    check_coefficient_symmetries(term.gamma, grid, z_symmetric);
  }

  AxisymContext ctx;
  ctx.grid = grid;
  ctx.lambda = lambda;
  ctx.nonlinearity = std::move(nonlinearity);
  ctx.gamma_z_symmetric = z_symmetric;

  const int n = grid.unknowns();
  const double dr = grid.dr();
  const double dz = grid.dz();
  ctx.weight.resize(n);
  ctx.radius_at.resize(n);
  ctx.node_x.resize(static_cast<std::size_t>(n));
  for (int j = 1; j < grid.nz; ++j) {
    for (int i = 0; i < grid.nr; ++i) {
      const int k = grid.index(i, j);
      ctx.radius_at[k] = grid.r(i);
      ctx.weight[k] = kTwoPi * grid.r(i) * dr * dz;
      ctx.node_x[static_cast<std::size_t>(k)] = Vec3(grid.r(i), 0.0, grid.z(j));
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(9 * n));

  // z-faces: r^2 (d_z alpha)^2 with midpoint-in-z, midpoint-in-r weights.
  for (int i = 0; i < grid.nr; ++i) {
    const double ri = grid.r(i);
    const double w = kTwoPi * ri * ri * ri * dr / dz;
    for (int j = 0; j < grid.nz; ++j) {
      const bool a_in = j >= 1;
      const bool b_in = j + 1 <= grid.nz - 1;
      const int a = a_in ? grid.index(i, j) : -1;
      const int b = b_in ? grid.index(i, j + 1) : -1;
      if (a_in) trips.emplace_back(a, a, w);
      if (b_in) trips.emplace_back(b, b, w);
      if (a_in && b_in) {
        trips.emplace_back(a, b, -w);
        trips.emplace_back(b, a, -w);
      }
    }
  }

  // r-faces: (2 alpha + r d_r alpha)^2 sampled at faces r = (i+1) dr with
  // trapezoid weights in r (the axis face carries weight zero through the
  // r-factor of the integrand). The wall face uses the odd ghost that pins
  // alpha to zero at r = R.
  for (int j = 1; j < grid.nz; ++j) {
    for (int f = 0; f < grid.nr; ++f) {
      const double rf = (f + 1) * dr;
      const double wq =
          kTwoPi * rf * (f == grid.nr - 1 ? 0.5 * dr : dr) * dz;
      if (f < grid.nr - 1) {
        const int a = grid.index(f, j);
        const int b = grid.index(f + 1, j);
        const double ca = 1.0 - rf / dr;
        const double cb = 1.0 + rf / dr;
        trips.emplace_back(a, a, wq * ca * ca);
        trips.emplace_back(b, b, wq * cb * cb);
        trips.emplace_back(a, b, wq * ca * cb);
        trips.emplace_back(b, a, wq * ca * cb);
      } else {
        const int a = grid.index(f, j);
        const double ca = -2.0 * grid.radius / dr;
        trips.emplace_back(a, a, wq * ca * ca);
      }
    }
  }

  // lambda times the r^2-weighted mass.
  for (int j = 1; j < grid.nz; ++j) {
    for (int i = 0; i < grid.nr; ++i) {
      const int k = grid.index(i, j);
      const double ri = grid.r(i);
      trips.emplace_back(k, k, lambda * kTwoPi * ri * ri * ri * dr * dz);
    }
  }

  ctx.quad.resize(n, n);
  ctx.quad.setFromTriplets(trips.begin(), trips.end());
  return ctx;
}

double reduced_energy(const AxisymState& state, const AxisymContext& ctx) {
  if (state.alpha.size() != ctx.grid.unknowns()) {
    throw StructuralError("profile length does not match the meridian grid");
  }
  const double quad = state.alpha.dot(ctx.quad * state.alpha);
  return 0.5 * quad - potential_value(state.alpha, ctx);
}

AxisymState reduced_gradient(const AxisymState& state,
                             const AxisymContext& ctx) {
  if (state.alpha.size() != ctx.grid.unknowns()) {
    throw StructuralError("profile length does not match the meridian grid");
  }
  Eigen::VectorXd pg;
  potential_gradient(state.alpha, ctx, pg);
  AxisymState out;
  out.alpha = ctx.quad * state.alpha - pg;
  return out;
}

SectorReport solve_symmetric(const AxisymContext& ctx, Sector sector,
                             const SolverConfig& cfg) {
  validate_solver_config(cfg);
  if (ctx.nonlinearity.degenerate()) {
    throw RegimeError(
        "the classical Nehari reduction needs a superquadratic nonlinearity; "
        "with F = 0 the reduced energy has no nontrivial critical points");
  }
  if (sector != Sector::all && !ctx.gamma_z_symmetric) {
    throw RegimeError(
        "coefficient is not symmetric under z -> H - z; parity sectors "
        "require z-symmetric coefficients, use the all sector");
  }

  SectorWorkspace ws;
  ws.ctx = &ctx;
  ws.S = sector_embedding(ctx.grid, sector);
  ws.quad_s = Eigen::SparseMatrix<double>(ws.S.transpose() * ctx.quad * ws.S);
  ws.ldlt.compute(ws.quad_s);
  if (ws.ldlt.info() != Eigen::Success ||
      (ws.ldlt.vectorD().array() <= 0.0).any()) {
    throw RegimeError(
        "lambda below reduced spectrum; symmetric solver restricted to "
        "definite regime");
  }

  const auto q_norm = [&](const Eigen::VectorXd& v) {
    return std::sqrt(std::max(0.0, v.dot(ws.quad_s * v)));
  };

  SectorReport report;
  report.sector = sector;
  double best_value = 1e300;
  double worst_value = -1e300;
  bool have_best = false;
  Eigen::VectorXd alpha_full(ctx.grid.unknowns());

  const std::uint64_t sector_salt =
      0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(sector) + 1);
  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng((cfg.seed ^ sector_salt) * 6364136223846793005ULL +
                        1442695040888963407ULL * (static_cast<std::uint64_t>(r) + 1));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Full-grid start, smoothed on even restarts to bias toward the
    // low-frequency profiles that carry the ground state, then folded into
    // the sector and normalized in the quadratic metric.
    Eigen::VectorXd full(ctx.grid.unknowns());
    for (int k = 0; k < full.size(); ++k) full[k] = unit(rng);
    if (r % 2 == 0) {
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd next = full;
        for (int j = 1; j < ctx.grid.nz; ++j) {
          for (int i = 0; i < ctx.grid.nr; ++i) {
            const int k = ctx.grid.index(i, j);
            double nb = 0.0;
            if (i > 0) nb += full[ctx.grid.index(i - 1, j)];
            if (i + 1 < ctx.grid.nr) nb += full[ctx.grid.index(i + 1, j)];
            if (j > 1) nb += full[ctx.grid.index(i, j - 1)];
            if (j + 1 < ctx.grid.nz) nb += full[ctx.grid.index(i, j + 1)];
            next[k] = 0.5 * full[k] + 0.125 * nb;
          }
        }
        full.swap(next);
      }
    }
    Eigen::VectorXd u = ws.S.transpose() * full;
    const double un = q_norm(u);
    if (!(un > 0.0)) continue;
    u /= un;

    try {
      double t = 1.0;
      double value = theta_value(ws, u, t, alpha_full);
      std::vector<PsRecord> history;
      double eta = 1.0;
      bool converged = false;
      double gnorm = 0.0;

      // Sphere-tangential gradient of the reduced value in the quadratic
      // metric, via the envelope identity at the constrained point t * S u.
      const auto metric_gradient = [&](Eigen::VectorXd& ghat) {
        Eigen::VectorXd g_full = ctx.quad * (t * alpha_full);
        Eigen::VectorXd pg;
        potential_gradient(t * alpha_full, ctx, pg);
        g_full -= pg;
        const Eigen::VectorXd g_beta = t * (ws.S.transpose() * g_full);
        ghat = ws.ldlt.solve(g_beta);
        ghat -= u.dot(ws.quad_s * ghat) * u;
        return q_norm(ghat);
      };

      // Descent phase: cheap and globally stable, but the preconditioned
      // curvature near the minimizer is too stiff for first-order steps, so
      // hand over once the iterate is in a basin.
      for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
        Eigen::VectorXd ghat;
        gnorm = metric_gradient(ghat);
        history.push_back(PsRecord{value, gnorm});
        if (gnorm <= cfg.tol_outer) {
          converged = true;
          break;
        }
        if (gnorm <= 1e-2 * (1.0 + std::abs(value))) break;

        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
          Eigen::VectorXd u_trial = u - eta * ghat;
          const double tn = q_norm(u_trial);
          if (tn > 0.0) {
            u_trial /= tn;
            double t_trial = t;
            Eigen::VectorXd alpha_trial(ctx.grid.unknowns());
            const double v_trial = theta_value(ws, u_trial, t_trial, alpha_trial);
            if (v_trial <= value - cfg.linesearch.sufficient_decrease * eta *
                                       gnorm * gnorm) {
              u = u_trial;
              t = t_trial;
              value = v_trial;
              alpha_full = alpha_trial;
              eta = std::min(eta * 1.5, 1e3);
              moved = true;
              break;
            }
          }
          eta *= cfg.linesearch.shrink;
          if (eta < 1e-16) break;
        }
        if (!moved) break;
        // Steps this small only rearrange rounding noise.
        if (eta < 1e-12) break;
      }

      // Newton phase on the free stationarity system quad_s b = S' f(S b),
      // damped on the residual in the inverse-quadratic metric. Quadratic
      // tail where the descent phase plateaus.
      if (!converged) {
        const int nfull = ctx.grid.unknowns();
        Eigen::VectorXd beta = t * u;
        const double t_floor = 0.3 * t;
        const auto free_residual = [&](const Eigen::VectorXd& b,
                                       Eigen::VectorXd& out) {
          const Eigen::VectorXd lifted = ws.S * b;
          Eigen::VectorXd pg;
          potential_gradient(lifted, ctx, pg);
          out.noalias() = ws.quad_s * b - ws.S.transpose() * pg;
          const Eigen::VectorXd dual = ws.ldlt.solve(out);
          return std::sqrt(std::max(0.0, out.dot(dual)));
        };

        Eigen::VectorXd G, G_trial;
        double phi = free_residual(beta, G);
        for (int nit = 0; nit < 50; ++nit) {
          const double t_len = q_norm(beta);
          if (t_len * phi <= 0.5 * cfg.tol_outer) break;

          Eigen::VectorXd lifted = ws.S * beta;
          Eigen::VectorXd curv(nfull);
          for (int k = 0; k < nfull; ++k) {
            const double r = ctx.radius_at[k];
            const double s = r * std::abs(lifted[k]);
            curv[k] =
                ctx.weight[k] * r * r *
                potential_curvature(
                    ctx.nonlinearity, ctx.node_x[static_cast<std::size_t>(k)], s);
          }
          const Eigen::SparseMatrix<double> hess =
              ws.quad_s - Eigen::SparseMatrix<double>(
                              ws.S.transpose() * curv.asDiagonal() * ws.S);
          Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
          lu.compute(hess);
          if (lu.info() != Eigen::Success) break;
          const Eigen::VectorXd step = lu.solve(-G);
          if (!step.allFinite()) break;

          bool accepted = false;
          double damp = 1.0;
          for (int ls = 0; ls < 12; ++ls) {
            const Eigen::VectorXd beta_trial = beta + damp * step;
            const double phi_trial = free_residual(beta_trial, G_trial);
            if (phi_trial <= (1.0 - 0.25 * damp) * phi &&
                q_norm(beta_trial) >= t_floor) {
              beta = beta_trial;
              G = G_trial;
              phi = phi_trial;
              accepted = true;
              break;
            }
            damp *= 0.5;
          }
          if (!accepted) break;
        }

        const double t_len = q_norm(beta);
        if (t_len > 0.0 && t_len * phi <= 0.5 * cfg.tol_outer) {
          u = beta / t_len;
          t = t_len;
          value = theta_value(ws, u, t, alpha_full);
          Eigen::VectorXd ghat;
          gnorm = metric_gradient(ghat);
          history.push_back(PsRecord{value, gnorm});
          converged = gnorm <= cfg.tol_outer;
        }
      }

      if (converged) {
        if (!have_best || value < best_value) {
          best_value = value;
          have_best = true;
          report.value = value;
          report.state.alpha = t * (ws.S * u);
          report.outer_residual = gnorm;
          report.ps_history = std::move(history);
        }
        worst_value = std::max(worst_value, value);
        ++report.converged_restarts;
      } else {
        std::ostringstream msg;
        msg << "restart " << r << " stalled at residual " << gnorm
            << " (value " << value << ", " << history.size()
            << " descent iterations)";
        report.warnings.push_back(msg.str());
      }
    } catch (const SolverError& err) {
      report.warnings.push_back(std::string("restart failed: ") + err.what());
    }
  }

  if (!have_best) {
    std::string msg = "no restart converged in the sector solve";
    if (!report.warnings.empty()) {
      msg += " (last restart: " + report.warnings.back() + ")";
    }
    throw SolverError(msg);
  }
  if (!(report.value > 0.0)) {
    throw SolverError("sector solve converged to a nonpositive value");
  }
  report.multistart_spread = worst_value - best_value;
  if (report.multistart_spread >
      10.0 * cfg.tol_outer * (1.0 + std::abs(report.value))) {
    report.warnings.push_back(
        "possible multiple local minimizers of the reduced sector value");
  }
  const AxisymState grad = reduced_gradient(report.state, ctx);
  report.el_residual = grad.alpha.norm();
  return report;
}

double profile_at(const AxisymState& state, const MeridianGrid& grid, double r,
                  double z) {
  if (state.alpha.size() != grid.unknowns()) {
    throw StructuralError("profile length does not match the meridian grid");
  }
  if (r >= grid.radius || z <= 0.0 || z >= grid.height) return 0.0;
  const double dr = grid.dr();
  const double dz = grid.dz();

  // r-neighbors with even reflection at the axis and the odd wall ghost.
  const double ur = r / dr - 0.5;
  int i0 = static_cast<int>(std::floor(ur));
  double fr = ur - i0;
  const double vz = z / dz;
  int j0 = static_cast<int>(std::floor(vz));
  double fz = vz - j0;
  j0 = std::clamp(j0, 0, grid.nz - 1);
  fz = std::clamp(fz, 0.0, 1.0);

  auto node_value = [&](int i, int j) -> double {
    if (j <= 0 || j >= grid.nz) return 0.0;
    if (i < 0) i = -i - 1;  // even across the axis
    if (i >= grid.nr) {
      const int mirror = 2 * grid.nr - 1 - i;  // odd ghost at the wall
      return mirror >= 0 ? -state.alpha[grid.index(mirror, j)] : 0.0;
    }
    return state.alpha[grid.index(i, j)];
  };

  const double a00 = node_value(i0, j0);
  const double a10 = node_value(i0 + 1, j0);
  const double a01 = node_value(i0, j0 + 1);
  const double a11 = node_value(i0 + 1, j0 + 1);
  return (1.0 - fr) * ((1.0 - fz) * a00 + fz * a01) +
         fr * ((1.0 - fz) * a10 + fz * a11);
}

GridField lift_to_3d(const AxisymState& state, const MeridianGrid& grid,
                     const GridSpec& grid3d) {
  GridField out = GridField::zero(grid3d);
  const double cx =
      0.5 * (grid3d.nodes[0].front() + grid3d.nodes[0].back());
  const double cy =
      0.5 * (grid3d.nodes[1].front() + grid3d.nodes[1].back());
  for (int i3 = 0; i3 < grid3d.resolution[2]; ++i3) {
    for (int i2 = 0; i2 < grid3d.resolution[1]; ++i2) {
      for (int i1 = 0; i1 < grid3d.resolution[0]; ++i1) {
        const Vec3 x = grid3d.node(i1, i2, i3);
        const double px = x[0] - cx;
        const double py = x[1] - cy;
        const double r = std::hypot(px, py);
        if (r >= grid.radius) continue;
        const double a = profile_at(state, grid, r, x[2]);
        if (a == 0.0) continue;
        const auto col = static_cast<Eigen::Index>(grid3d.flat(i1, i2, i3));
        out.values.col(col) = Vec3(-py * a, px * a, 0.0);
      }
    }
  }
  return out;
}

}  // namespace curlgs
