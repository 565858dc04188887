#include "curlgs/split.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "curlgs/errors.hpp"

using namespace curlgs;

namespace {
ModeBasis pi_basis(double cutoff) {
  return enumerate_modes(BoxDomain(std::numbers::pi, std::numbers::pi, std::numbers::pi), cutoff);
}
}  // namespace

TEST(SplitSpaces, LambdaZeroIsAllPlus) {
  ModeBasis basis = pi_basis(6.5);
  const SpaceSplit split = split_spaces(basis, 0.0);
  EXPECT_EQ(split.plus_indices.size(), basis.divfree.size());
  EXPECT_TRUE(split.tilde_indices.empty());
  EXPECT_TRUE(split.kernel_indices.empty());
  EXPECT_EQ(split.n, 0);
  EXPECT_DOUBLE_EQ(split.delta, 1.0);
  EXPECT_FALSE(split.needs_strict_convexity);
  EXPECT_FALSE(split.tilde_margin.has_value());
}

TEST(SplitSpaces, LambdaMinusTwoPutsGroundTripletInKernel) {
  ModeBasis basis = pi_basis(6.5);
  const SpaceSplit split = split_spaces(basis, -2.0);
  EXPECT_EQ(split.kernel_indices.size(), 3u);
  EXPECT_TRUE(split.tilde_indices.empty());
  EXPECT_EQ(split.n, 3);
  EXPECT_TRUE(split.needs_strict_convexity);
  for (int k : split.kernel_indices) {
    EXPECT_NEAR(basis.divfree[k].eigenvalue, 2.0, 1e-12);
  }
  // Smallest surviving plus mode is lambda_k = 3: delta = (3 - 2) / 3.
  EXPECT_NEAR(split.delta, 1.0 / 3.0, 1e-12);
}

TEST(SplitSpaces, LambdaBetweenEigenvaluesGivesTildeWithMargin) {
  ModeBasis basis = pi_basis(6.5);
  const SpaceSplit split = split_spaces(basis, -2.5);
  EXPECT_EQ(split.tilde_indices.size(), 3u);
  EXPECT_TRUE(split.kernel_indices.empty());
  EXPECT_EQ(split.n, 3);
  EXPECT_FALSE(split.needs_strict_convexity);
  ASSERT_TRUE(split.tilde_margin.has_value());
  // Tilde modes sit at lambda_k = 2: margin (2.5 - 2) / 2 = 0.25.
  EXPECT_NEAR(*split.tilde_margin, 0.25, 1e-12);
  EXPECT_NEAR(split.delta, 0.5 / 3.0, 1e-12);
}

TEST(SplitSpaces, PartitionStableUnderSmallLambdaPerturbation) {
  ModeBasis basis = pi_basis(6.5);
  const SpaceSplit base = split_spaces(basis, -2.5);
  for (double eps : {-0.4, -0.1, 0.1, 0.4}) {
    const SpaceSplit other = split_spaces(basis, -2.5 + eps);
    EXPECT_EQ(other.plus_indices, base.plus_indices);
    EXPECT_EQ(other.tilde_indices, base.tilde_indices);
    EXPECT_EQ(other.kernel_indices, base.kernel_indices);
  }
}

TEST(SplitSpaces, RejectsPositiveLambda) {
  ModeBasis basis = pi_basis(6.5);
  EXPECT_THROW(split_spaces(basis, 0.5), RegimeError);
}

TEST(SplitSpaces, RejectsEmptyPlusSpace) {
  // Cutoff 2.5 keeps only the lambda_k = 2 triplet; at lambda = -2 the whole
  // basis is kernel and there is no positive subspace left.
  ModeBasis basis = pi_basis(2.5);
  EXPECT_THROW(split_spaces(basis, -2.0), RegimeError);
}

TEST(SplitSpaces, RejectsDegenerateBasis) {
  ModeBasis basis = pi_basis(0.5);
  EXPECT_THROW(split_spaces(basis, 0.0), RegimeError);
}
