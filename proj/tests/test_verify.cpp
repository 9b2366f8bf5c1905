#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "adaptive_mc/verify.hpp"

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

TEST(Kcoh, NoViolations) {
  const auto rep = amc::check_kcoh({}, 2000, 1);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.verdict, amc::Verdict::kPass);
  amc::KcohParams spiked;
  spiked.spiked = true;
  const auto adv = amc::check_kcoh(spiked, 2000, 1);
  EXPECT_EQ(adv.violations, 0u);
  EXPECT_GE(adv.worst_margin, 0.0);
}

TEST(Noisycoh, RankOneHandExample) {
  const std::size_t m = 10;
  amc::DenseMatrix e1 = amc::DenseMatrix::Zero(m, 1);
  e1(0, 0) = 1.0;
  amc::DenseMatrix rot = amc::DenseMatrix::Zero(m, 1);
  rot(0, 0) = std::cos(0.2);
  rot(1, 0) = std::sin(0.2);
  const auto clean = amc::orthonormalize_columns(e1);
  const auto noisy = amc::orthonormalize_columns(rot);
  EXPECT_NEAR(amc::coherence(noisy), 9.605304970014426, 1e-12);
  EXPECT_NEAR(amc::noisycoh_margin(noisy, clean), 20.8 - 9.605304970014426, 1e-12);
  EXPECT_EQ(amc::check_noisycoh({}, 2000, 2).violations, 0u);
}

TEST(Ind, ExtremalSequence) {
  const std::vector<double> ones(10000, 1.0);
  EXPECT_NEAR(amc::ind_worst_margin(ones, 0.01), 0.3141592653589793, 1e-12);
  const auto rep = amc::check_ind({}, 1000, 7);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.verdict, amc::Verdict::kPass);
}

TEST(Ededler, ZeroAngleIsTight) {
  // With theta = 0 both sides are 18 (r/m) mu ln^2(1/delta): equality, which
  // passes at the check tolerance but not as a strict inequality.
  for (std::size_t m : {20u, 100u, 1000u}) {
    for (std::size_t r : {1u, 4u}) {
      EXPECT_NEAR(amc::ededler_margin(m, r, 1.5, 0.05, 0.0), 0.0, amc::kCheckTolerance);
    }
  }
}

TEST(Ededler, PositiveAngleFailsAsStated) {
  // The mu terms cancel: the statement reduces to ln(r/delta) >= 9 ln^2(1/delta),
  // independent of m and mu. Value from tests/oracles/derive.py.
  EXPECT_NEAR(amc::ededler_margin(100, 4, 1.0, 0.05, 0.3), -13.7497824105557, 1e-9);
  EXPECT_NEAR(amc::ededler_margin(100, 4, 7.0, 0.05, 0.3), -13.7497824105557, 1e-9);
  // The condition the proof reduces to does hold.
  EXPECT_GT(amc::ededler_reduced_margin(100, 4, 0.05), 0.0);
  const auto rep = amc::check_ededler({}, 500, 3);
  EXPECT_EQ(rep.verdict, amc::Verdict::kFail);
}

TEST(Blum, HandConstruction) {
  amc::DenseMatrix a = amc::DenseMatrix::Zero(3, 1);
  a(0, 0) = 1.0;
  const Vector b = vec({0, 1, 0});
  const Vector bt = vec({0, std::cos(0.1), std::sin(0.1)});
  const auto margin = amc::blum_margin(a, b, bt);
  ASSERT_TRUE(margin.has_value());
  // bound = 0.1 and the realized angle is exactly 0.1.
  EXPECT_NEAR(*margin, 0.0, 1e-12);
  EXPECT_FALSE(amc::blum_margin(a, b, vec({2, 0, 0})).has_value());
  EXPECT_EQ(amc::check_blum({}, 2000, 4).violations, 0u);
}

TEST(Ks14, SidesOnFullSampling) {
  amc::DenseMatrix u = amc::DenseMatrix::Zero(4, 1);
  u(0, 0) = 1.0;
  const auto basis = amc::orthonormalize_columns(u);
  const auto s = amc::ks14_sides(basis, vec({1, 1, 0, 0}), amc::IndexSet::full(4), 0.05);
  EXPECT_NEAR(s.full_sq, 1.0, 1e-15);
  EXPECT_NEAR(s.sampled_sq, 1.0, 1e-15);
  EXPECT_NEAR(s.mu_residual, 4.0, 1e-12);
  EXPECT_NEAR(s.mu_basis, 4.0, 1e-12);
}

TEST(Ks14, WithinBoundAndNotApplicable) {
  const auto rep = amc::check_ks14({}, 300, 5);
  EXPECT_EQ(rep.verdict, amc::Verdict::kPass);
  amc::Ks14Params tiny;
  tiny.d = 10;
  const auto na = amc::check_ks14(tiny, 50, 5);
  EXPECT_EQ(na.trials, 0u);
  EXPECT_EQ(na.verdict, amc::Verdict::kNotApplicable);
}

TEST(Conc, WithinBoundWithSubsampling) {
  amc::ConcParams p;
  p.d = 60;
  const auto rep = amc::check_conc(p, 1000, 6);
  EXPECT_GT(rep.trials, 0u);
  EXPECT_EQ(rep.verdict, amc::Verdict::kPass);
}

TEST(Matcher, TailWithinBoundAndDeterministicExtreme) {
  amc::MatcherParams p;
  p.summands = 30;
  const auto rep = amc::check_matcher(p, 5000, 8);
  EXPECT_LE(rep.violation_rate(), rep.allowed_rate());
  p.deterministic = true;
  EXPECT_EQ(amc::check_matcher(p, 10, 8).violations, 0u);
}

TEST(Reports, ThreadCountDoesNotChangeResults) {
  const auto a = amc::check_conc({}, 300, 9);
  setenv("ADAPTIVE_MC_THREADS", "3", 1);
  const auto b = amc::check_conc({}, 300, 9);
  unsetenv("ADAPTIVE_MC_THREADS");
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
}

TEST(Reports, NamesAndErrors) {
  EXPECT_EQ(amc::run_checks({"all"}, 20, 1).size(), 8u);
  EXPECT_THROW(amc::run_checks({"nope"}, 20, 1), std::invalid_argument);
  amc::CheckReport r;
  r.trials = 100;
  r.theoretical_bound = 0.1;
  EXPECT_NEAR(r.allowed_rate(), 0.19, 1e-12);
}
