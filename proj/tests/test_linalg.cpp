#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "adaptive_mc/linalg.hpp"
#include "adaptive_mc/sampling.hpp"

namespace amc = adaptive_mc;
using amc::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Orthonormalize, DropsDependentVector) {
  const std::vector<Vector> in{vec({1, 1, 0}), vec({1, -1, 0}), vec({2, 0, 0})};
  const auto basis = amc::orthonormalize(in);
  ASSERT_EQ(basis.dim(), 2u);
  for (const Vector& v : in) {
    EXPECT_LT((v - amc::project(basis, v)).norm(), 1e-10);
  }
  EXPECT_LT((basis.columns().transpose() * basis.columns() - amc::DenseMatrix::Identity(2, 2)).norm(),
            1e-12);
}

TEST(Orthonormalize, RejectsMismatchedLengthsAndEmptyInput) {
  EXPECT_THROW(amc::orthonormalize(std::vector<Vector>{}), std::invalid_argument);
  EXPECT_THROW(amc::orthonormalize(std::vector<Vector>{vec({1, 0}), vec({1, 0, 0})}),
               amc::DimensionError);
}

TEST(Orthonormalize, RandomMatricesStayOrthonormal) {
  amc::Rng rng(3, amc::Stream::kVerify);
  for (int t = 0; t < 50; ++t) {
    const auto basis = amc::orthonormalize_columns(rng.gaussian_matrix(40, 7));
    ASSERT_EQ(basis.dim(), 7u);
    const amc::DenseMatrix gram = basis.columns().transpose() * basis.columns();
    EXPECT_LT((gram - amc::DenseMatrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Project, HandComputed) {
  const auto basis = amc::orthonormalize(std::vector<Vector>{vec({1, 1, 0})});
  const Vector p = amc::project(basis, vec({1, 0, 0}));
  EXPECT_NEAR(p(0), 0.5, 1e-15);
  EXPECT_NEAR(p(1), 0.5, 1e-15);
  EXPECT_NEAR(p(2), 0.0, 1e-15);
  EXPECT_EQ(amc::project(amc::OrthonormalBasis(3), vec({1, 2, 3})).norm(), 0.0);
}

TEST(RestrictedResidual, MatchesNormalEquations) {
  const auto basis = amc::orthonormalize(std::vector<Vector>{vec({1, 1, 1})});
  const amc::IndexSet omega(3, {0, 1});
  const auto r = amc::restricted_residual_norm(basis, omega, vec({1, 0}));
  EXPECT_NEAR(r.norm, 0.70710678118654757, 1e-12);
  EXPECT_FALSE(r.degenerate);
  // Empty basis: the whole sampled vector is residual.
  EXPECT_DOUBLE_EQ(amc::restricted_residual_norm(amc::OrthonormalBasis(3), omega, vec({3, 4})).norm,
                   5.0);
}

TEST(ReconstructColumn, HandComputed) {
  const auto basis = amc::orthonormalize(std::vector<Vector>{vec({1, 1, 1})});
  const amc::IndexSet omega(3, {0, 1});
  const Vector x = amc::reconstruct_column(basis, omega, vec({1, 0}));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(x(i), 0.5, 1e-12);
  EXPECT_THROW(amc::reconstruct_column(amc::OrthonormalBasis(3), omega, vec({1, 0})),
               std::invalid_argument);
}

TEST(ReconstructColumn, ExactForInSpanColumns) {
  amc::Rng rng(11, amc::Stream::kVerify);
  const auto basis = amc::orthonormalize_columns(rng.gaussian_matrix(30, 4));
  const Vector y = basis.columns() * rng.gaussian_vector(4);
  const auto omega = amc::sample_uniform_subset(30, 10, rng);
  EXPECT_LT((amc::reconstruct_column(basis, omega, amc::restrict_vector(y, omega)) - y).norm(), 1e-10);
}

TEST(Coherence, HandComputedAndRange) {
  const auto basis = amc::orthonormalize(std::vector<Vector>{vec({1, 0, 0, 0}), vec({0, 1, 1, 0})});
  EXPECT_NEAR(amc::coherence(basis), 2.0, 1e-12);
  EXPECT_THROW(amc::coherence(amc::OrthonormalBasis(4)), std::invalid_argument);

  amc::Rng rng(5, amc::Stream::kVerify);
  for (int t = 0; t < 20; ++t) {
    const auto b = amc::orthonormalize_columns(rng.gaussian_matrix(25, 3));
    const double mu = amc::coherence(b);
    EXPECT_GE(mu, 1.0 - 1e-12);
    EXPECT_LE(mu, 25.0 / 3.0 + 1e-12);
  }
}

TEST(Angles, HandComputed) {
  const auto e1 = amc::orthonormalize(std::vector<Vector>{vec({1, 0, 0})});
  EXPECT_NEAR(amc::vector_subspace_angle(vec({1, 1, 0}), e1).radians(), std::numbers::pi / 4, 1e-12);
  EXPECT_DOUBLE_EQ(amc::vector_subspace_angle(vec({1, 1, 0}), amc::OrthonormalBasis(3)).radians(),
                   std::numbers::pi / 2);

  const auto rotated =
      amc::orthonormalize(std::vector<Vector>{vec({std::cos(0.3), std::sin(0.3), 0})});
  EXPECT_NEAR(amc::subspace_subspace_angle(rotated, e1).radians(), 0.3, 1e-12);

  // Asymmetric: a larger space is never inside a smaller one.
  const auto plane = amc::orthonormalize(std::vector<Vector>{vec({1, 0, 0}), vec({0, 1, 0})});
  EXPECT_DOUBLE_EQ(amc::subspace_subspace_angle(plane, e1).radians(), std::numbers::pi / 2);
  EXPECT_NEAR(amc::subspace_subspace_angle(e1, plane).radians(), 0.0, 1e-12);

  EXPECT_NEAR(amc::vector_vector_angle(vec({1, 0}), vec({-1, 0})).radians(), 0.0, 1e-12);
}

TEST(Angle, RangeChecked) {
  EXPECT_THROW(amc::Angle(-0.1), std::out_of_range);
  EXPECT_THROW(amc::Angle(2.0), std::out_of_range);
  EXPECT_DOUBLE_EQ(amc::Angle::clamped(2.0).radians(), amc::Angle::kMax);
}

TEST(IndexSet, Validation) {
  EXPECT_THROW(amc::IndexSet(3, {2, 1}), std::invalid_argument);
  EXPECT_THROW(amc::IndexSet(3, {0, 3}), std::out_of_range);
  EXPECT_THROW(amc::IndexSet(3, {1, 1}), std::invalid_argument);
  EXPECT_EQ(amc::IndexSet::full(4).size(), 4u);
}

TEST(TopSingularSubspace, RecoversLowRankColumnSpace) {
  amc::Rng rng(8, amc::Stream::kVerify);
  const auto basis = amc::orthonormalize_columns(rng.gaussian_matrix(20, 3));
  const amc::DenseMatrix a = basis.columns() * rng.gaussian_matrix(3, 15);
  const auto top = amc::top_left_singular_subspace(a, 3);
  EXPECT_LT(amc::subspace_subspace_angle(top, basis).radians(), 1e-7);
}
