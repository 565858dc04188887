#include "curlgs/transforms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curlgs/errors.hpp"
#include "curlgs/quadrature.hpp"
#include "support/oracles.hpp"

using namespace curlgs;
using curlgs::testing::product_integral;
using curlgs::testing::random_state;

namespace {

const double kPi = std::numbers::pi;

ModeBasis pi_basis(double cutoff) { return enumerate_modes(BoxDomain(kPi, kPi, kPi), cutoff); }

// Index of the k=(1,1,0) single-polarization mode, whose unnormalized field
// is (0, 0, sin x1 sin x2).
int tm_mode_index(const ModeBasis& basis) {
  for (std::size_t k = 0; k < basis.divfree.size(); ++k) {
    const auto& idx = basis.divfree[k].index;
    if (idx.k[0] == 1 && idx.k[1] == 1 && idx.k[2] == 0) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

TEST(Quadrature, GaussLegendreIntegratesPolynomialsAndTrig) {
  const AxisRule rule = gauss_legendre(12, 2.0);
  double linear = 0.0, trig = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    linear += rule.weights[i] * rule.nodes[i];
    trig += rule.weights[i] * std::sin(kPi * rule.nodes[i] / 2.0);
  }
  EXPECT_NEAR(linear, 2.0, 1e-14);
  // int_0^2 sin(pi x / 2) dx = 4 / pi.
  EXPECT_NEAR(trig, 4.0 / kPi, 1e-13);
}

TEST(Quadrature, PairwiseSumMatchesPlainSum) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(1023);
  long double reference = 0.0;
  for (double& x : v) {
    x = dist(rng);
    reference += x;
  }
  EXPECT_NEAR(pairwise_sum(v), static_cast<double>(reference), 1e-13);
}

// The closed-form integrals of the unnormalized field E0 = (0,0,sin x1 sin x2)
// on (0,pi)^3, cross-checked against one-dimensional Simpson integration
// composed over the axes:
//   int |curl E0|^2 = pi^3/2, int |E0|^2 = pi^3/4, int |E0|^4 = 9 pi^3/64.
TEST(Transforms, ClosedFormIntegralsOfTheCornerstoneMode) {
  ModeBasis basis = pi_basis(2.5);
  const int tm = tm_mode_index(basis);
  ASSERT_GE(tm, 0);
  const Mode& mode = basis.divfree[tm];

  auto sin2 = [](double x) { return std::sin(x) * std::sin(x); };
  auto sin4 = [&](double x) { return sin2(x) * sin2(x); };
  auto cos2 = [](double x) { return std::cos(x) * std::cos(x); };
  auto one = [](double) { return 1.0; };
  const BoxDomain box = basis.domain;

  const double b2_oracle = product_integral(sin2, sin2, one, box);
  const double b4_oracle = product_integral(sin4, sin4, one, box);
  // curl E0 = (sin x1 cos x2, -cos x1 sin x2, 0).
  const double a_oracle =
      product_integral(sin2, cos2, one, box) + product_integral(cos2, sin2, one, box);

  EXPECT_NEAR(b2_oracle, kPi * kPi * kPi / 4.0, 1e-10);
  EXPECT_NEAR(b4_oracle, 9.0 * kPi * kPi * kPi / 64.0, 1e-10);
  EXPECT_NEAR(a_oracle, kPi * kPi * kPi / 2.0, 1e-10);

  // Same integrals through the library: scale the unit mode by its closed
  // form L2 norm sqrt(pi^3/4) so the synthesized field equals E0.
  const double e0_norm = std::sqrt(kPi * kPi * kPi / 4.0);
  StateVector state = StateVector::zero(basis);
  state.divfree[tm] = e0_norm;
  const GridSpec grid = default_grid(basis, 4.0);
  const GridField field = synthesize(state, basis, grid);

  double b2 = 0.0, b4 = 0.0, a = 0.0;
  std::size_t idx = 0;
  for (int i3 = 0; i3 < grid.resolution[2]; ++i3) {
    for (int i2 = 0; i2 < grid.resolution[1]; ++i2) {
      for (int i1 = 0; i1 < grid.resolution[0]; ++i1, ++idx) {
        const double w = grid.weight(i1, i2, i3);
        const double e2 = field.values.col(idx).squaredNorm();
        b2 += w * e2;
        b4 += w * e2 * e2;
        a += w * (e0_norm * mode_curl_eval(mode, grid.node(i1, i2, i3))).squaredNorm();
      }
    }
  }
  EXPECT_NEAR(b2, kPi * kPi * kPi / 4.0, 1e-12);
  EXPECT_NEAR(b4, 9.0 * kPi * kPi * kPi / 64.0, 1e-12);
  EXPECT_NEAR(a, kPi * kPi * kPi / 2.0, 1e-12);
}

TEST(Transforms, SynthesizeMatchesClosedFormPointwise) {
  ModeBasis basis = pi_basis(2.5);
  const int tm = tm_mode_index(basis);
  ASSERT_GE(tm, 0);
  StateVector state = StateVector::zero(basis);
  state.divfree[tm] = std::sqrt(kPi * kPi * kPi / 4.0);

  const GridSpec grid = GridSpec::gauss(basis.domain, {9, 9, 9});
  const GridField field = synthesize(state, basis, grid);
  std::size_t idx = 0;
  for (int i3 = 0; i3 < 9; ++i3) {
    for (int i2 = 0; i2 < 9; ++i2) {
      for (int i1 = 0; i1 < 9; ++i1, ++idx) {
        const Vec3 x = grid.node(i1, i2, i3);
        const Vec3 expected(0.0, 0.0, std::sin(x[0]) * std::sin(x[1]));
        EXPECT_LE((field.values.col(idx) - expected).norm(), 1e-13);
      }
    }
  }
}

TEST(Transforms, SynthesizeIsLinear) {
  ModeBasis basis = pi_basis(6.5);
  std::mt19937_64 rng(11);
  const StateVector s1 = random_state(basis, rng);
  const StateVector s2 = random_state(basis, rng);
  const double alpha = 0.7, beta = -1.3;

  StateVector combo{alpha * s1.divfree + beta * s2.divfree,
                    alpha * s1.gradient + beta * s2.gradient};
  const GridSpec grid = GridSpec::gauss(basis.domain, {12, 12, 12});
  const GridField f1 = synthesize(s1, basis, grid);
  const GridField f2 = synthesize(s2, basis, grid);
  const GridField fc = synthesize(combo, basis, grid);
  const double err =
      (fc.values - alpha * f1.values - beta * f2.values).cwiseAbs().maxCoeff();
  EXPECT_LE(err, 1e-13 * (1.0 + fc.values.cwiseAbs().maxCoeff()));
}

TEST(Transforms, ZeroStateSynthesizesToZero) {
  ModeBasis basis = pi_basis(2.5);
  const GridSpec grid = GridSpec::gauss(basis.domain, {8, 8, 8});
  const GridField field = synthesize(StateVector::zero(basis), basis, grid);
  EXPECT_EQ(field.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Transforms, ProjectSynthesizeRoundTrip) {
  ModeBasis basis = pi_basis(6.5);
  std::mt19937_64 rng(13);
  const StateVector state = random_state(basis, rng);

  const GridSpec grid = GridSpec::gauss(basis.domain, {32, 32, 32});
  const StateVector back = project(synthesize(state, basis, grid), basis);
  EXPECT_LE((back.divfree - state.divfree).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((back.gradient - state.gradient).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Transforms, ProjectZeroIsZero) {
  ModeBasis basis = pi_basis(2.5);
  const GridSpec grid = GridSpec::gauss(basis.domain, {16, 16, 16});
  const StateVector out = project(GridField::zero(grid), basis);
  EXPECT_EQ(out.divfree.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Transforms, PureGradientFieldHasZeroDivfreeProjection) {
  ModeBasis basis = pi_basis(6.5);
  StateVector state = StateVector::zero(basis);
  state.gradient[0] = 1.0;  // grad of the normalized sin sin sin potential

  const GridSpec grid = GridSpec::gauss(basis.domain, {32, 32, 32});
  const StateVector back = project(synthesize(state, basis, grid), basis);
  EXPECT_LE(back.divfree.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(back.gradient[0], 1.0, 1e-12);
}

TEST(Transforms, ResolventIsDiagonalSymmetricAndBounded) {
  ModeBasis basis = pi_basis(6.5);
  const Eigen::Index n = static_cast<Eigen::Index>(basis.divfree.size());

  // Basis vector in: scaled by 1/(lambda_k + 1); lambda_1 = 2 gives 1/3.
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(n);
  e0[0] = 1.0;
  const Eigen::VectorXd Ke0 = resolvent_apply(e0, basis);
  EXPECT_NEAR(Ke0[0], 1.0 / 3.0, 1e-15);
  for (Eigen::Index k = 1; k < n; ++k) EXPECT_EQ(Ke0[k], 0.0);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> dist;
  Eigen::VectorXd f(n), g(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    f[k] = dist(rng);
    g[k] = dist(rng);
  }
  const double fg = resolvent_apply(f, basis).dot(g);
  const double gf = f.dot(resolvent_apply(g, basis));
  EXPECT_NEAR(fg, gf, 1e-13 * (1.0 + std::abs(fg)));

  // Operator norm on the truncated space: 1/(lambda_1 + 1) = 1/3.
  double max_gain = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd ek = Eigen::VectorXd::Zero(n);
    ek[k] = 1.0;
    max_gain = std::max(max_gain, resolvent_apply(ek, basis).norm());
  }
  EXPECT_NEAR(max_gain, 1.0 / 3.0, 1e-15);
}

TEST(Transforms, UnderResolvedGridRaisesAliasingError) {
  ModeBasis basis = pi_basis(6.5);  // max per-axis frequency 2
  const GridSpec grid = GridSpec::gauss(basis.domain, {3, 3, 3});
  try {
    project(GridField::zero(grid), basis);
    FAIL() << "expected AliasingError";
  } catch (const AliasingError& e) {
    EXPECT_EQ(e.required[0], 4);
    EXPECT_EQ(e.required[1], 4);
    EXPECT_EQ(e.required[2], 4);
  }
}

TEST(Transforms, IncompatibleStateIsRejected) {
  ModeBasis coarse = pi_basis(2.5);
  ModeBasis fine = pi_basis(6.5);
  const GridSpec grid = GridSpec::gauss(coarse.domain, {16, 16, 16});
  EXPECT_THROW(synthesize(StateVector::zero(coarse), fine, grid), StructuralError);
}

TEST(Transforms, StateTraceResidualIsTiny) {
  ModeBasis basis = pi_basis(6.5);
  std::mt19937_64 rng(19);
  const StateVector state = random_state(basis, rng);
  EXPECT_LE(boundary_trace_residual(state, basis, 12), 1e-12);
  EXPECT_EQ(boundary_trace_residual(StateVector::zero(basis), basis, 12), 0.0);
}
