#pragma once

#include <vector>

#include "curlgs/coefficient_field.hpp"
#include "curlgs/geometry.hpp"

namespace curlgs {

// One summand of the nonlinear energy density, internally normalized as
// (gamma(x) / exponent) * |matrix u|^exponent so that the field derivative is
// gamma(x) |matrix u|^(exponent-2) matrix^T (matrix u).
struct PowerTerm {
  CoefficientField gamma = CoefficientField::constant(1.0);
  Mat3 matrix = Mat3::Identity();
  double exponent = 4.0;
};

// Analytic constants for the superlinear growth envelope of a spec:
//   |f(x,u)| <= c (1 + |u|^(p-1)),   F(x,u) >= d |u|^p,
//   theta^{-1} <f(x,u),u> >= F(x,u).
struct NonlinearityConstants {
  double p = 0.0;
  double c = 0.0;
  double d = 0.0;
  double theta = 0.0;
};

// Sum of power terms F(x,u) = sum_i (gamma_i(x)/p_i) |M_i u|^{p_i}, the
// built-in family whose structural hypotheses hold by construction. The
// degenerate spec (no terms, F == 0) stands in for media with no nonlinear
// response and is rejected by the solvers.
class NonlinearitySpec {
 public:
  // Default-constructed specs are the degenerate zero nonlinearity.
  NonlinearitySpec() = default;

  static NonlinearitySpec power(std::vector<PowerTerm> terms);
  static NonlinearitySpec zero();

  double F(const Vec3& x, const Vec3& u) const;
  Vec3 f(const Vec3& x, const Vec3& u) const;

  bool degenerate() const { return degenerate_; }
  bool certified() const { return certified_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  const NonlinearityConstants& constants() const { return constants_; }

  // True when every mixing matrix is a scaled isometry (M^T M = sigma^2 I),
  // so F depends on u only through |u|.
  bool is_radial() const { return radial_; }

  // Radial evaluations used by the cylindrical reduction: F(x,u) and the
  // slope g(x,s) with f(x,u) = g(x,|u|) u. Require is_radial().
  double radial_F(const Vec3& x, double magnitude) const;
  double radial_slope(const Vec3& x, double magnitude) const;

  // Same spec with every coefficient field multiplied by factor > 0.
  NonlinearitySpec scaled(double factor) const;

 private:
  void require_radial() const;

  std::vector<PowerTerm> terms_;
  std::vector<double> sigma_;  // per-term radial singular value when radial
  NonlinearityConstants constants_{4.0, 0.0, 0.0, 4.0};
  bool certified_ = false;
  bool degenerate_ = true;
  bool radial_ = true;
};

// Physical constructor for a Kerr-type cubic medium with permittivity eps,
// permeability mu, angular frequency omega, and susceptibility profile
// alpha_coef: the time-harmonic reduction gives lambda = -mu omega^2 eps and
// a quartic term with gamma(x) = mu omega^2 alpha_coef(x). omega == 0 leaves
// no nonlinear response; the result is then flagged degenerate.
struct KerrMedium {
  NonlinearitySpec spec;
  double lambda = 0.0;
  bool degenerate = false;
};

KerrMedium kerr_from_physics(double eps, double mu, double omega,
                             const CoefficientField& alpha_coef);

}  // namespace curlgs
