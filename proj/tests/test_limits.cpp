#include <gtest/gtest.h>

#include <cmath>

#include "padic/report.hpp"

using namespace padic;

namespace {

std::vector<PAdicNumber> grid(int p) {
  std::vector<PAdicNumber> out;
  for (auto& [label, t] : GridSpec{}.points(p)) out.push_back(t);
  return out;
}

double sup_error(const Law& law, const LimitScheme& s, int n) {
  double e = 0.0;
  for (const auto& t : grid(law.prime())) e = std::max(e, std::abs(theoretical_fn(law, s, n, t) - law.cf(t)));
  return e;
}

}  // namespace

TEST(LimitScheme, GeometricCounts) {
  const auto s = LimitScheme::geometric(2, 2, 1, std::pow(2.0, -0.7), 12);
  EXPECT_EQ(s.count(0), 1u);
  EXPECT_EQ(s.count(1), 1u);    // 2^0.7 = 1.62
  EXPECT_EQ(s.count(3), 4u);    // 2^2.1 = 4.29
  EXPECT_EQ(s.count(10), 128u);  // 2^7 exactly, whatever pow rounds to
  EXPECT_EQ(s.norm_exponent(3), 3);  // B_3 = 2^-3 has |B_3| = 8
  EXPECT_THROW(s.count(13), std::out_of_range);
  EXPECT_THROW(LimitScheme::geometric(2, 2, 1, 1.5, 3), std::invalid_argument);
}

TEST(LimitScheme, ExplicitLists) {
  const auto s = LimitScheme::explicit_list(3, {{1, 3}, {1, 9}, {2, 27}}, {1, 2, 5});
  EXPECT_EQ(s.count(0), 1u);
  EXPECT_EQ(s.count(3), 5u);
  EXPECT_EQ(s.norm_exponent(2), 2);
  EXPECT_TRUE(congruent(s.inverse_norm(3), PAdicNumber::from_rational(27, 2, 3)));
  EXPECT_FALSE(s.has_gamma());
  EXPECT_THROW(LimitScheme::explicit_list(3, {{1, 3}}, {1, 2}), std::invalid_argument);
  EXPECT_THROW(LimitScheme::explicit_list(3, {{1, 3}, {1, 9}}, {2, 1}), std::invalid_argument);
}

TEST(Limits, ExactRegime) {
  for (auto [p, alpha] : {std::pair{2, 1.0}, {3, 2.0}, {5, 1.0}}) {
    const Law g = Law::stable({1.0, alpha, p});
    const auto s = LimitScheme::geometric(p, p, 1, std::pow(double(p), -alpha), 10);
    for (int n = 0; n <= 10; ++n) EXPECT_LE(sup_error(g, s, n), 1e-14) << p << " " << alpha << " " << n;
  }
}

TEST(Limits, DecayWithinFactorFour) {
  const double beta = std::pow(2.0, -0.7);
  const Law g = Law::stable({1.0, 0.7, 2});
  const auto s = LimitScheme::geometric(2, 2, 1, beta, 10);
  const double c = sup_error(g, s, 2) / (beta * beta);
  for (int n = 2; n <= 10; ++n) EXPECT_LE(sup_error(g, s, n), 4 * c * std::pow(beta, n)) << n;
}

TEST(Limits, PhiTrajectoryAndShiftedSet) {
  const Law g = Law::stable({1.0, 1.0, 2});
  const auto s = LimitScheme::geometric(2, 2, 1, 0.5, 8);
  double prev0 = 1e9, prev1 = 1e9;
  for (int n = 1; n <= 8; ++n) {
    const double e0 = std::abs(phi_n_measure(g, s, n, TailSet{0}) - 2.0 / 3);
    // gamma0^-1 M_{0,inf} = M_{1,inf}, whose mass is beta * 2/3
    const double e1 = std::abs(phi_n_measure(g, s, n, TailSet{1}) - 0.5 * 2.0 / 3);
    EXPECT_LT(e0, prev0);
    EXPECT_LT(e1, prev1);
    prev0 = e0;
    prev1 = e1;
  }
  EXPECT_LE(prev0, 5e-3);
  // Phi_n on a compact set approaches Phi as well
  const auto exact = make_example_measure_exact(Rational(1), 1, 2);
  const auto set = annulus(-1, 2, 2);
  EXPECT_NEAR(phi_n_measure(g, s, 8, set), to_double(measure_mass(exact, set)), 5e-3);
}

TEST(Limits, DegenerateSchemes) {
  const Law haar = Law::haar(Ball(PAdicNumber::zero(2), 0));
  const auto s = LimitScheme::explicit_list(2, {{1, 2}, {1, 4}, {1, 8}}, {1, 2, 3});
  for (int n = 1; n <= 3; ++n)
    for (int k = -4; k <= n; ++k)
      EXPECT_EQ(theoretical_fn(haar, s, n, PAdicNumber::from_integer(1, 2).shifted(-k)), std::complex<double>(1.0));
  EXPECT_EQ(theoretical_fn(haar, s, 3, PAdicNumber::from_integer(1, 2).shifted(-4)), std::complex<double>(0.0));
  // a point mass stays a point mass, with its phase multiplied by k(n)
  const Law pt = Law::point(PAdicNumber::from_rational(1, 3, 2));
  const auto t = PAdicNumber::from_integer(1, 2);
  EXPECT_NEAR(std::abs(theoretical_fn(pt, s, 2, t)), 1.0, 1e-15);
}

TEST(Limits, SimulationIsThreadCountInvariant) {
  const Law g = Law::stable({1.0, 1.0, 3});
  const auto s = LimitScheme::geometric(3, 3, 1, 1.0 / 3, 3);
  const auto a = simulate_sums(g, s, 2, 500, 9, -3, 1);
  const auto b = simulate_sums(g, s, 2, 500, 9, -3, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(to_display_string(a[i]), to_display_string(b[i]));
  for (const auto& x : a) EXPECT_EQ(x.absolute_precision(), 3);
}

TEST(Limits, MonteCarloMatchesTheory) {
  const Law g = Law::stable({1.0, 1.0, 2});
  const auto s = LimitScheme::geometric(2, 2, 1, 0.5, 4);
  const std::size_t m = 4000;
  int inside = 0, total = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto xs = simulate_sums(g, s, 3, m, seed, -3, 2);
    for (int k = -3; k <= 3; ++k) {
      const auto t = PAdicNumber::from_integer(1, 2).shifted(k);
      ++total;
      inside += std::abs(empirical_cf(xs, t) - theoretical_fn(g, s, 3, t)) <= 4.0 / std::sqrt(double(m));
    }
  }
  EXPECT_GE(inside, 0.95 * total);
}

TEST(Limits, BudgetIsEnforced) {
  const Law g = Law::stable({1.0, 1.0, 2});
  const auto s = LimitScheme::geometric(2, 2, 1, 0.5, 30);
  EXPECT_THROW(simulate_sums(g, s, 27, 1000, 1, -3), BudgetError);
}

TEST(Limits, ScalingIdentityOfTarget) {
  const Law g = Law::stable({2.0, 0.7, 3});
  const auto r = scaling_identity_check([&](const PAdicNumber& t) { return g.cf(t); }, PAdicNumber::from_integer(3, 3),
                                        std::pow(3.0, -0.7), grid(3));
  for (double x : r) EXPECT_LE(x, 1e-14);
}

TEST(ConvergenceReport, StableScenarioPasses) {
  Scenario sc;
  sc.name = "unit";
  sc.law = Law::stable({1.0, 1.0, 2});
  sc.scheme = LimitScheme::geometric(2, 2, 1, 0.5, 6);
  sc.target = sc.law;
  sc.phi_sets = {{"tail0", TailSet{0}}};
  sc.balls = {Ball(PAdicNumber::zero(2), 0)};
  sc.m = 2000;
  sc.mc_n = {2};
  sc.resolution = -4;
  sc.phi_tolerance = 2e-2;
  sc.expect_positive = true;
  const auto rep = convergence_report(sc);
  EXPECT_TRUE(rep.passed());
  for (const auto& v : rep.verdicts) EXPECT_TRUE(v.passed) << v.check << ": " << v.detail;
  EXPECT_EQ(report_csv(rep, Json::object(), 1), report_csv(convergence_report(sc), Json::object(), 1));
}

TEST(ConvergenceReport, HaarCutoffClassified) {
  Scenario sc;
  sc.law = Law::haar(Ball(PAdicNumber::zero(2), 0));
  sc.scheme = LimitScheme::explicit_list(2, {{1, 1}, {1, 1}, {1, 1}}, {1, 2, 3});
  sc.target = sc.law;
  sc.classify = ClassifySpec{6, 8, "haar_cutoff xi=0 N=0"};
  const auto rep = convergence_report(sc);
  ASSERT_TRUE(rep.classification);
  EXPECT_EQ(rep.classification->to_string(), "haar_cutoff xi=0 N=0");
  EXPECT_TRUE(rep.passed());
  sc.classify->expect = "delta xi=0";
  EXPECT_FALSE(convergence_report(sc).passed());
}
