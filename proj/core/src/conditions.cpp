#include "curlgs/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "curlgs/errors.hpp"

namespace curlgs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Screening thresholds. Sampling cannot test strict inequalities verbatim,
// so each strict condition is screened against a documented relative floor;
// the planted scales keep the model families far on the passing side.
constexpr double kStrictFloor = 1e-8;    // relative floor for strict "<"
constexpr double kPositivityFloor = 1e-8;  // F must exceed this times |u|^p
constexpr double kRoundingTol = 1e-12;   // slack for non-strict inequalities
constexpr double kDecayFactor = 0.5;     // required shrink of |f|/|u| near 0
constexpr double kPremiseTol = 1e-8;     // reciprocity premise residual
constexpr double kConclusionTol = 1e-7;  // slack on the reciprocity bound

struct EvalFn {
  std::function<double(const Vec3&, const Vec3&)> F;
  std::function<Vec3(const Vec3&, const Vec3&)> f;
  double p = 4.0;
  double theta = 4.0;
  // Rounding slack for non-strict inequalities involving f: wider when the
  // gradient is finite-differenced, whose noise is around 1e-10 relative.
  double grad_tol = kRoundingTol;
};

EvalFn make_eval(const BlackBoxF& fn) {
  if (!fn.F) {
    throw ConfigError("black-box nonlinearity must provide F");
  }
  EvalFn eval;
  eval.F = fn.F;
  eval.p = fn.p_hint;
  eval.theta = fn.theta_hint > 0.0 ? fn.theta_hint : fn.p_hint;
  eval.grad_tol = fn.f ? kRoundingTol : 1e-9;
  if (fn.f) {
    eval.f = fn.f;
  } else {
    auto F = fn.F;
    eval.f = [F](const Vec3& x, const Vec3& u) {
      const double h = 1e-6 * (1.0 + u.norm());
      Vec3 g;
      for (int a = 0; a < 3; ++a) {
        Vec3 up = u, dn = u;
        up[a] += h;
        dn[a] -= h;
        g[a] = (F(x, up) - F(x, dn)) / (2.0 * h);
      }
      return g;
    };
  }
  return eval;
}

struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double unit() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
  }

  Vec3 in_box(const BoxDomain& box) {
    return Vec3(unit() * box.edge[0], unit() * box.edge[1],
                unit() * box.edge[2]);
  }

  Vec3 unit_vec() {
    const double z = 1.0 - 2.0 * unit();
    const double phi = 2.0 * std::numbers::pi_v<double> * unit();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  }
};

// Violation margins. Positive return means the witness violates the
// condition's screened predicate by that amount; the same functions back
// both detection and re-evaluation.

double margin_decay(const EvalFn& fn, const Vec3& x, const Vec3& u,
                    const Vec3& v) {
  const double ru = u.norm();
  const double rv = v.norm();
  if (ru <= 0.0 || rv <= 0.0) {
    return kNegInf;
  }
  const double ratio_small = fn.f(x, u).norm() / ru;
  const double ratio_large = fn.f(x, v).norm() / rv;
  return ratio_small - kDecayFactor * ratio_large -
         kRoundingTol * (1.0 + ratio_large);
}

double margin_superquadratic(const EvalFn& fn, const Vec3& x, const Vec3& u) {
  if (u.norm() <= 0.0) {
    return kNegInf;
  }
  const double F = fn.F(x, u);
  const double pairing = fn.f(x, u).dot(u);
  const double slack = 0.5 * pairing - F;
  const double floor = kStrictFloor * (std::abs(F) + 0.5 * std::abs(pairing));
  const double m_equality = floor - slack;
  const double m_positivity =
      kPositivityFloor * std::pow(u.norm(), fn.p) - F;
  return std::max(m_equality, m_positivity);
}

double margin_midpoint_convexity(const EvalFn& fn, const Vec3& x,
                                 const Vec3& u, const Vec3& v) {
  const double Fu = fn.F(x, u);
  const double Fv = fn.F(x, v);
  const double gap = 0.5 * (Fu + Fv) - fn.F(x, 0.5 * (u + v));
  return -gap - kRoundingTol * (1.0 + std::abs(Fu) + std::abs(Fv));
}

double margin_strict_convexity(const EvalFn& fn, const Vec3& x, const Vec3& u,
                               const Vec3& v) {
  const double Fu = fn.F(x, u);
  const double Fv = fn.F(x, v);
  const double gap = 0.5 * (Fu + Fv) - fn.F(x, 0.5 * (u + v));
  return kRoundingTol * (1.0 + std::abs(Fu) + std::abs(Fv)) - gap;
}

double margin_reciprocity(const EvalFn& fn, const Vec3& x, const Vec3& u,
                          const Vec3& v) {
  const double a = fn.f(x, u).dot(u);
  if (std::abs(a) < 1e-300) {
    return kNegInf;
  }
  const double Fu = fn.F(x, u);
  const double Fv = fn.F(x, v);
  const double cross = fn.f(x, u).dot(v);
  const double lhs = Fu - Fv;
  const double rhs = (a * a - cross * cross) / (2.0 * a);
  const double scale = 1.0 + std::abs(Fu) + std::abs(Fv) + std::abs(rhs);
  const double m_nonstrict = lhs - rhs - kConclusionTol * scale;
  const double m_strict = std::abs(lhs) > 1e-6 * scale
                              ? lhs - rhs + 1e-10 * scale
                              : kNegInf;
  return std::max(m_nonstrict, m_strict);
}

double margin_ambrosetti(const EvalFn& fn, const Vec3& x, const Vec3& u) {
  if (u.norm() <= 0.0) {
    return kNegInf;
  }
  const double F = fn.F(x, u);
  const double pairing = fn.f(x, u).dot(u);
  const double slack = pairing / fn.theta - F;
  const double m_bound =
      -slack - fn.grad_tol * (1.0 + std::abs(F) + std::abs(pairing) / fn.theta);
  const double m_positivity =
      kPositivityFloor * std::pow(u.norm(), fn.p) - F;
  return std::max(m_bound, m_positivity);
}

struct ViolationTracker {
  double best = 0.0;
  std::optional<ConditionWitness> witness;

  void offer(double margin, const Vec3& x, const Vec3& u,
             const std::optional<Vec3>& v = std::nullopt,
             const std::optional<double>& t = std::nullopt) {
    if (margin > 0.0 && margin > best) {
      best = margin;
      ConditionWitness w;
      w.x = x;
      w.u = u;
      w.v = v;
      w.t = t;
      w.margin = margin;
      witness = w;
    }
  }
};

ConditionFinding close_finding(std::string condition, long samples,
                               const ViolationTracker& tracker,
                               std::string pass_note,
                               std::optional<double> estimate = std::nullopt) {
  ConditionFinding finding;
  finding.condition = std::move(condition);
  finding.samples = samples;
  finding.estimate = estimate;
  if (tracker.witness.has_value()) {
    finding.status = ConditionStatus::Violated;
    finding.witness = tracker.witness;
    finding.note = "sampled violation; witness re-evaluates the inequality";
  } else {
    finding.status = ConditionStatus::SampledPass;
    finding.note = std::move(pass_note);
  }
  return finding;
}

// Solves the reciprocity premise <f(x,u),t v0> = <f(x,t v0),u> for t > 0 by
// bisection over a log-spaced bracket scan. Returns the premise-exact scale,
// or nothing when no sign change exists in range.
std::optional<double> solve_premise_scale(const EvalFn& fn, const Vec3& x,
                                          const Vec3& u, const Vec3& v0,
                                          double radius) {
  auto residual = [&](double t) {
    const Vec3 v = t * v0;
    return fn.f(x, u).dot(v) - fn.f(x, v).dot(u);
  };
  const double t_lo_start = 1e-3 * radius;
  const double t_hi_end = 2.0 * radius;
  double prev_t = t_lo_start;
  double prev_r = residual(prev_t);
  constexpr int kScan = 48;
  for (int i = 1; i <= kScan; ++i) {
    const double t = t_lo_start * std::pow(t_hi_end / t_lo_start,
                                           static_cast<double>(i) / kScan);
    const double r = residual(t);
    if (prev_r == 0.0) {
      return prev_t;
    }
    if ((prev_r < 0.0) != (r < 0.0)) {
      double lo = prev_t, hi = t;
      double r_lo = prev_r;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r_mid = residual(mid);
        if (r_mid == 0.0) {
          return mid;
        }
        if ((r_lo < 0.0) != (r_mid < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          r_lo = r_mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_r = r;
  }
  return std::nullopt;
}

ConditionReport screen(const EvalFn& fn, const BoxDomain& box,
                       const SamplerConfig& cfg) {
  if (cfg.n_samples < 1000) {
    throw ConfigError("condition sampler needs at least 1000 samples");
  }
  if (!(cfg.radius > 0.0)) {
    throw ConfigError("condition sampler radius must be positive");
  }
  Rng rng(cfg.seed);
  const long n = cfg.n_samples;
  ConditionReport report;

  // F1: differentiability and Caratheodory structure are not decidable by
  // sampling; the screen checks that every evaluation is finite.
  {
    ViolationTracker tracker;
    for (long i = 0; i < n; ++i) {
      const Vec3 x = rng.in_box(box);
      const Vec3 u = (cfg.radius * (1.0 - rng.unit())) * rng.unit_vec();
      const double F = fn.F(x, u);
      const Vec3 g = fn.f(x, u);
      if (!std::isfinite(F) || !g.allFinite()) {
        tracker.offer(1.0, x, u);
      }
    }
    report.findings.push_back(close_finding(
        "F1", n, tracker,
        "all evaluations finite; continuity is not decidable by sampling"));
  }

  // F2: |f|/|u| must decay toward 0 along rays; screened by comparing the
  // ratio on the innermost dyadic shell against the outermost one.
  {
    ViolationTracker tracker;
    const long n_rays = std::max<long>(64, n / 16);
    const double r_small = cfg.radius * std::pow(4.0, -6);
    long used = 0;
    for (long i = 0; i < n_rays; ++i) {
      const Vec3 x = rng.in_box(box);
      const Vec3 d = rng.unit_vec();
      const Vec3 u = r_small * d;
      const Vec3 v = cfg.radius * d;
      tracker.offer(margin_decay(fn, x, u, v), x, u, v);
      ++used;
    }
    report.findings.push_back(close_finding(
        "F2", used, tracker, "gradient-to-field ratio decays toward zero"));
  }

  // F3: the growth constant is estimated as the sampled supremum of
  // |f(x,u)| / (1 + |u|^(p-1)); an estimate, never a certificate.
  {
    double c_hat = 0.0;
    ViolationTracker tracker;
    for (long i = 0; i < n; ++i) {
      const Vec3 x = rng.in_box(box);
      const Vec3 u = (cfg.radius * (1.0 - rng.unit())) * rng.unit_vec();
      const double denom = 1.0 + std::pow(u.norm(), fn.p - 1.0);
      const double ratio = fn.f(x, u).norm() / denom;
      if (!std::isfinite(ratio)) {
        tracker.offer(1.0, x, u);
      } else {
        c_hat = std::max(c_hat, ratio);
      }
    }
    report.findings.push_back(close_finding(
        "F3", n, tracker, "sampled growth constant; estimate, not a certificate",
        c_hat));
  }

  // F4: strict superquadraticity 0.5 <f,u> > F and positivity F >= d |u|^p,
  // screened with relative strictness floors.
  {
    ViolationTracker tracker;
    double d_hat = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i) {
      const Vec3 x = rng.in_box(box);
      const double r = cfg.radius * (1.0 - rng.unit());
      const Vec3 u = r * rng.unit_vec();
      tracker.offer(margin_superquadratic(fn, x, u), x, u);
      const double F = fn.F(x, u);
      if (F > 0.0 && r > 0.0) {
        d_hat = std::min(d_hat, F / std::pow(r, fn.p));
      }
    }
    if (!std::isfinite(d_hat)) {
      d_hat = 0.0;
    }
    report.findings.push_back(close_finding(
        "F4", n, tracker,
        "superquadraticity and positivity hold at all samples", d_hat));
  }

  // F5: midpoint convexity on random pairs.
  {
    ViolationTracker tracker;
    for (long i = 0; i < n; ++i) {
      const Vec3 x = rng.in_box(box);
      const Vec3 u = (cfg.radius * (1.0 - rng.unit())) * rng.unit_vec();
      const Vec3 v = (cfg.radius * (1.0 - rng.unit())) * rng.unit_vec();
      tracker.offer(margin_midpoint_convexity(fn, x, u, v), x, u, v);
    }
    report.findings.push_back(
        close_finding("F5", n, tracker, "midpoint convexity at all samples"));
  }

  // F6: strict-convexity modulus on equal-norm shell pairs. Uniformity of
  // the modulus over all compact sets is not decidable by sampling; the
  // observed minimum is reported as an estimate only.
  {
    ViolationTracker tracker;
    double modulus = std::numeric_limits<double>::infinity();
    const long per_shell = std::max<long>(64, n / 16);
    long used = 0;
    for (double shell : {0.25, 0.5, 1.0}) {
      const double r = shell * cfg.radius;
      for (long i = 0; i < per_shell; ++i) {
        const Vec3 x = rng.in_box(box);
        const Vec3 d1 = rng.unit_vec();
        Vec3 d2 = rng.unit_vec();
        int guard = 0;
        while ((d1 - d2).norm() < 0.5 && guard++ < 64) {
          d2 = rng.unit_vec();
        }
        const Vec3 u = r * d1;
        const Vec3 v = r * d2;
        tracker.offer(margin_strict_convexity(fn, x, u, v), x, u, v);
        const double gap =
            0.5 * (fn.F(x, u) + fn.F(x, v)) - fn.F(x, 0.5 * (u + v));
        modulus = std::min(modulus, gap);
        ++used;
      }
    }
    if (!std::isfinite(modulus)) {
      modulus = 0.0;
    }
    report.findings.push_back(close_finding(
        "F6", used, tracker,
        "observed shell modulus positive; uniformity over compact sets is not "
        "decidable by sampling; binding when -lambda is a curl-curl eigenvalue",
        modulus));
  }

  // F7: the reciprocity premise <f(x,u),v> = <f(x,v),u> != 0 defines a
  // measure-zero set, so pairs are constructed on it: equal-norm rotations
  // (premise-exact for radial F) and scales solved to premise-exactness
  // along random second directions. Near-premise pairs within tolerance are
  // kept, others skipped.
  {
    ViolationTracker tracker;
    long used = 0;
    const long attempts = std::max<long>(128, n / 4);
    for (long i = 0; i < attempts; ++i) {
      const Vec3 x = rng.in_box(box);
      const double r = cfg.radius * (0.1 + 0.9 * rng.unit());
      const Vec3 u = r * rng.unit_vec();

      Vec3 v;
      std::optional<double> t_used;
      if (i % 2 == 0) {
        const double angle =
            0.3 + (std::numbers::pi_v<double> - 0.3) * rng.unit();
        v = Eigen::AngleAxisd(angle, rng.unit_vec()).toRotationMatrix() * u;
      } else {
        const Vec3 v0 = rng.unit_vec();
        const auto t = solve_premise_scale(fn, x, u, v0, cfg.radius);
        if (!t.has_value()) {
          continue;
        }
        v = *t * v0;
        t_used = *t;
      }

      const double forward = fn.f(x, u).dot(v);
      const double backward = fn.f(x, v).dot(u);
      const double premise_scale =
          0.5 * (std::abs(forward) + std::abs(backward));
      if (std::abs(forward - backward) > kPremiseTol * (1.0 + premise_scale) ||
          premise_scale < 1e-10 * (1.0 + fn.f(x, u).norm() * v.norm())) {
        continue;
      }
      tracker.offer(margin_reciprocity(fn, x, u, v), x, u, v, t_used);
      ++used;
    }
    std::string note = used > 0
                           ? "reciprocity bound holds on premise-exact pairs"
                           : "no premise-satisfying pairs found; vacuous";
    report.findings.push_back(
        close_finding("F7", used, tracker, std::move(note)));
  }

  // F8: theta^{-1} <f,u> >= F > 0 with the declared theta; the sampled
  // infimum of <f,u>/F is reported as the largest admissible theta.
  {
    ViolationTracker tracker;
    double theta_hat = std::numeric_limits<double>::infinity();
    for (long i = 0; i < n; ++i) {
      const Vec3 x = rng.in_box(box);
      const Vec3 u = (cfg.radius * (1.0 - rng.unit())) * rng.unit_vec();
      tracker.offer(margin_ambrosetti(fn, x, u), x, u);
      const double F = fn.F(x, u);
      if (F > 0.0) {
        theta_hat = std::min(theta_hat, fn.f(x, u).dot(u) / F);
      }
    }
    if (!std::isfinite(theta_hat)) {
      theta_hat = 0.0;
    }
    report.findings.push_back(close_finding(
        "F8", n, tracker, "Ambrosetti-Rabinowitz bound holds at all samples",
        theta_hat));
  }

  return report;
}

}  // namespace

bool ConditionReport::all_hold() const {
  return std::none_of(findings.begin(), findings.end(),
                      [](const ConditionFinding& f) {
                        return f.status == ConditionStatus::Violated;
                      });
}

const ConditionFinding& ConditionReport::finding(
    std::string_view condition) const {
  for (const ConditionFinding& f : findings) {
    if (f.condition == condition) {
      return f;
    }
  }
  throw StructuralError("no finding for condition " + std::string(condition));
}

BlackBoxF as_black_box(const NonlinearitySpec& spec) {
  BlackBoxF fn;
  fn.F = [spec](const Vec3& x, const Vec3& u) { return spec.F(x, u); };
  fn.f = [spec](const Vec3& x, const Vec3& u) { return spec.f(x, u); };
  fn.p_hint = spec.constants().p;
  fn.theta_hint = spec.constants().theta;
  return fn;
}

ConditionReport check_conditions(const NonlinearitySpec& spec,
                                 const BoxDomain& box,
                                 const SamplerConfig& sampler) {
  if (!spec.certified()) {
    return check_conditions(as_black_box(spec), box, sampler);
  }
  ConditionReport report;
  const NonlinearityConstants& k = spec.constants();
  auto certified = [&](std::string condition, std::string note,
                       std::optional<double> estimate = std::nullopt) {
    ConditionFinding f;
    f.condition = std::move(condition);
    f.status = ConditionStatus::Certified;
    f.note = std::move(note);
    f.estimate = estimate;
    report.findings.push_back(std::move(f));
  };
  certified("F1", "power family: differentiable with continuous gradient");
  certified("F2", "gradient vanishes superlinearly at 0 (exponents exceed 2)");
  certified("F3", "analytic growth constant from coefficient bounds", k.c);
  certified("F4", "analytic lower-bound constant from the top exponent", k.d);
  certified("F5", "norm powers with exponent above 2 are convex");
  certified("F6",
            "strictly convex; binding when -lambda is a curl-curl eigenvalue");
  certified("F7", "reciprocity bound holds for coefficient-weighted norm "
                  "powers");
  certified("F8", "holds with theta equal to the smallest exponent", k.theta);
  return report;
}

ConditionReport check_conditions(const BlackBoxF& fn, const BoxDomain& box,
                                 const SamplerConfig& sampler) {
  return screen(make_eval(fn), box, sampler);
}

double reevaluate_witness(const BlackBoxF& fn,
                          const ConditionFinding& finding) {
  if (!finding.witness.has_value()) {
    throw StructuralError("finding for " + finding.condition +
                          " carries no witness");
  }
  const EvalFn eval = make_eval(fn);
  const ConditionWitness& w = *finding.witness;
  if (finding.condition == "F2") {
    return margin_decay(eval, w.x, w.u, w.v.value());
  }
  if (finding.condition == "F4") {
    return margin_superquadratic(eval, w.x, w.u);
  }
  if (finding.condition == "F5") {
    return margin_midpoint_convexity(eval, w.x, w.u, w.v.value());
  }
  if (finding.condition == "F6") {
    return margin_strict_convexity(eval, w.x, w.u, w.v.value());
  }
  if (finding.condition == "F7") {
    return margin_reciprocity(eval, w.x, w.u, w.v.value());
  }
  if (finding.condition == "F8") {
    return margin_ambrosetti(eval, w.x, w.u);
  }
  throw StructuralError("no re-evaluable predicate for condition " +
                        finding.condition);
}

}  // namespace curlgs
