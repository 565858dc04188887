#include "curlgs/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "curlgs/errors.hpp"

namespace curlgs {

namespace {

// Singular values of the mixing matrix, largest first.
Vec3 singular_values(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  return svd.singularValues();
}

// s^p for s >= 0 with multiply-only paths for the small integer exponents
// the solvers evaluate in their inner loops.
double pow_mag(double s, double p) {
  if (p == 4.0) {
    const double s2 = s * s;
    return s2 * s2;
  }
  if (p == 3.0) {
    return s * s * s;
  }
  if (p == 2.0) {
    return s * s;
  }
  if (p == 1.0) {
    return s;
  }
  return std::pow(s, p);
}

}  // namespace

NonlinearitySpec NonlinearitySpec::power(std::vector<PowerTerm> terms) {
  if (terms.empty()) {
    throw ConfigError("nonlinearity needs at least one power term");
  }
  NonlinearitySpec spec;
  spec.terms_ = std::move(terms);
  spec.certified_ = true;
  spec.degenerate_ = false;
  spec.radial_ = true;
  spec.sigma_.reserve(spec.terms_.size());

  double p_max = 0.0;
  double theta = 1e300;
  double c = 0.0;
  for (const PowerTerm& term : spec.terms_) {
    if (!(term.exponent > 2.0) || !(term.exponent < 6.0)) {
      throw ConfigError("power term exponent must lie strictly between 2 and 6");
    }
    const Vec3 sv = singular_values(term.matrix);
    const double s_max = sv[0];
    const double s_min = sv[2];
    if (!(s_min > 1e-12 * std::max(1.0, s_max))) {
      throw ConfigError("power term mixing matrix must be invertible");
    }
    const Mat3 mtm = term.matrix.transpose() * term.matrix;
    const double sigma2 = mtm.trace() / 3.0;
    const bool term_radial =
        (mtm - sigma2 * Mat3::Identity()).norm() <= 1e-12 * sigma2;
    spec.radial_ = spec.radial_ && term_radial;
    spec.sigma_.push_back(std::sqrt(sigma2));

    p_max = std::max(p_max, term.exponent);
    theta = std::min(theta, term.exponent);
    c += term.gamma.max_bound() * std::pow(s_max, term.exponent);
  }

  // Every term is nonnegative, so the terms of maximal exponent alone give
  // the lower bound F >= d |u|^p valid for all u.
  double d = 0.0;
  for (const PowerTerm& term : spec.terms_) {
    if (term.exponent >= p_max - 1e-12) {
      const double s_min = singular_values(term.matrix)[2];
      d += term.gamma.min_bound() * std::pow(s_min, p_max) / p_max;
    }
  }
  spec.constants_ = NonlinearityConstants{p_max, c, d, theta};
  return spec;
}

NonlinearitySpec NonlinearitySpec::zero() { return NonlinearitySpec{}; }

double NonlinearitySpec::F(const Vec3& x, const Vec3& u) const {
  double acc = 0.0;
  for (const PowerTerm& term : terms_) {
    const Vec3 mu = term.matrix * u;
    const double s = mu.norm();
    if (s > 0.0) {
      acc += term.gamma(x) / term.exponent * pow_mag(s, term.exponent);
    }
  }
  return acc;
}

Vec3 NonlinearitySpec::f(const Vec3& x, const Vec3& u) const {
  Vec3 acc = Vec3::Zero();
  for (const PowerTerm& term : terms_) {
    const Vec3 mu = term.matrix * u;
    const double s = mu.norm();
    if (s > 0.0) {
      acc += term.gamma(x) * pow_mag(s, term.exponent - 2.0) *
             (term.matrix.transpose() * mu);
    }
  }
  return acc;
}

void NonlinearitySpec::require_radial() const {
  if (!radial_) {
    throw RegimeError(
        "nonlinearity is not radial in u; the symmetric ansatz requires "
        "condition (S)");
  }
}

double NonlinearitySpec::radial_F(const Vec3& x, double magnitude) const {
  require_radial();
  double acc = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const double s = sigma_[i] * magnitude;
    if (s > 0.0) {
      acc += terms_[i].gamma(x) / terms_[i].exponent *
             pow_mag(s, terms_[i].exponent);
    }
  }
  return acc;
}

double NonlinearitySpec::radial_slope(const Vec3& x, double magnitude) const {
  require_radial();
  double acc = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (magnitude > 0.0) {
      acc += terms_[i].gamma(x) *
             pow_mag(sigma_[i], terms_[i].exponent) *
             pow_mag(magnitude, terms_[i].exponent - 2.0);
    }
  }
  return acc;
}

NonlinearitySpec NonlinearitySpec::scaled(double factor) const {
  if (degenerate_) {
    return *this;
  }
  std::vector<PowerTerm> terms = terms_;
  for (PowerTerm& term : terms) {
    term.gamma = term.gamma.scaled(factor);
  }
  return power(std::move(terms));
}

KerrMedium kerr_from_physics(double eps, double mu, double omega,
                             const CoefficientField& alpha_coef) {
  if (!(eps > 0.0) || !(mu > 0.0)) {
    throw ConfigError("permittivity and permeability must be positive");
  }
  KerrMedium medium;
  medium.lambda = -mu * omega * omega * eps;
  medium.degenerate = (omega == 0.0);
  if (medium.degenerate) {
    medium.spec = NonlinearitySpec::zero();
    return medium;
  }
  PowerTerm term;
  term.gamma = alpha_coef.scaled(mu * omega * omega);
  term.matrix = Mat3::Identity();
  term.exponent = 4.0;
  medium.spec = NonlinearitySpec::power({term});
  return medium;
}

}  // namespace curlgs
