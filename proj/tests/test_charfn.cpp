#include <gtest/gtest.h>

#include <cmath>

#include "padic/charfn.hpp"
#include "padic/sampler.hpp"

using namespace padic;

namespace {

PAdicNumber q(long long m, long long n, int p) { return PAdicNumber::from_rational(m, n, p); }

// mu(Z_p) for exp(-a |t|^alpha) summed directly over the spheres of the dual ball
double unit_ball_mass_oracle(double a, double alpha, int p) {
  double s = 0.0;
  for (int k = -200; k <= 0; ++k) s += (1.0 - 1.0 / p) * std::pow(p, k) * std::exp(-a * std::pow(p, alpha * k));
  return s + 0.0;  // t = 0 carries no Haar mass
}

}  // namespace

TEST(StableCf, ClosedForm) {
  const StableParams s{1.0, 1.0, 2};
  EXPECT_DOUBLE_EQ(stable_cf(s, q(1, 1, 2)), std::exp(-1.0));
  EXPECT_DOUBLE_EQ(stable_cf(s, q(1, 2, 2)), std::exp(-2.0));
  EXPECT_DOUBLE_EQ(stable_cf(s, q(12, 1, 2)), std::exp(-0.25));
  EXPECT_EQ(stable_cf(s, PAdicNumber::zero(2)), 1.0);
  EXPECT_THROW(StableParams({0.0, 1.0, 2}).validate(), std::invalid_argument);
  EXPECT_THROW(StableParams({1.0, -1.0, 2}).validate(), std::invalid_argument);
}

TEST(StableCf, ScalingByP) {
  // g(p t) = g(t)^{p^-alpha}
  for (double alpha : {0.5, 0.7, 2.0}) {
    const StableParams s{1.3, alpha, 3};
    for (int k = -4; k <= 4; ++k) {
      const auto t = PAdicNumber::from_integer(2, 3).shifted(k);
      EXPECT_NEAR(stable_cf(s, PAdicNumber::from_integer(3, 3) * t), std::pow(stable_cf(s, t), std::pow(3.0, -alpha)), 1e-15);
    }
  }
}

TEST(BallProbability, UnitBallReference) {
  const auto g = RadialCharFn::stable({1.0, 1.0, 2});
  const auto z2 = ball_probability(g, Ball(PAdicNumber::zero(2), 0));
  EXPECT_NEAR(z2.value, 0.5480427915295705, 1e-13);
  EXPECT_LE(z2.error_bound, 1e-13);
  for (int p : {2, 3, 5})
    for (double alpha : {0.5, 1.0, 2.0})
      EXPECT_NEAR(ball_probability(RadialCharFn::stable({0.7, alpha, p}), Ball(PAdicNumber::zero(p), 0)).value,
                  unit_ball_mass_oracle(0.7, alpha, p), 1e-12);
}

TEST(BallProbability, PartitionsAddUp) {
  const auto g = RadialCharFn::stable({1.0, 0.7, 3});
  const Ball unit(PAdicNumber::zero(3), 0);
  double sum = 0.0;
  for (const Ball& b : unit.children()) sum += ball_probability(g, b).value;
  EXPECT_NEAR(sum, ball_probability(g, unit).value, 1e-13);
  // radial law: the two non-zero children of Z_3 carry equal mass
  EXPECT_NEAR(ball_probability(g, unit.children()[1]).value, ball_probability(g, unit.children()[2]).value, 1e-15);
}

TEST(BallProbability, NormalizationOnGrowingBalls) {
  for (const auto& g : {RadialCharFn::stable({1.0, 1.0, 2}), RadialCharFn::stable({2.0, 0.5, 5}), RadialCharFn::omega(-2, 3),
                        RadialCharFn::delta_zero(7)}) {
    double prev = 0.0;
    for (int n = -4; n <= 40; ++n) {
      const double m = ball_probability(g, Ball(PAdicNumber::zero(g.p), n)).value;
      EXPECT_GE(m, prev - 1e-14);
      prev = m;
    }
    EXPECT_NEAR(prev, 1.0, 1e-12) << g.name;
  }
}

TEST(BallProbability, OmegaAndDelta) {
  // omega_N is the law of Haar measure on B(0, p^-N)
  const auto g = RadialCharFn::omega(2, 3);
  EXPECT_NEAR(ball_probability(g, Ball(PAdicNumber::zero(3), -2)).value, 1.0, 1e-15);
  EXPECT_NEAR(ball_probability(g, Ball(PAdicNumber::zero(3), -3)).value, 1.0 / 3, 1e-15);
  EXPECT_NEAR(ball_probability(g, Ball(q(9, 1, 3), -3)).value, 1.0 / 3, 1e-15);
  EXPECT_NEAR(ball_probability(g, Ball(q(1, 1, 3), -1)).value, 0.0, 1e-15);
  EXPECT_NEAR(ball_probability(RadialCharFn::delta_zero(2), Ball(PAdicNumber::zero(2), -30)).value, 1.0, 1e-15);
}

TEST(SphereMasses, SumToOne) {
  const auto t = sphere_masses(RadialCharFn::stable({1.0, 0.7, 2}));
  EXPECT_NEAR(t.total(), 1.0, 1e-12);
  EXPECT_EQ(t.clamped, 0);
  EXPECT_NEAR(t.mass(0), tail_probability(RadialCharFn::stable({1.0, 0.7, 2}), -1).value -
                             tail_probability(RadialCharFn::stable({1.0, 0.7, 2}), 0).value,
              1e-15);
}

TEST(EmpiricalCf, PointMassAndPhases) {
  const std::vector<PAdicNumber> xs = {q(1, 2, 2), q(1, 2, 2), PAdicNumber::zero(2), q(3, 2, 2)};
  // chi(1/2) = -1
  const auto v = empirical_cf(xs, q(1, 1, 2));
  EXPECT_DOUBLE_EQ(v.real(), (-1.0 - 1.0 + 1.0 - 1.0) / 4);
  EXPECT_DOUBLE_EQ(v.imag(), 0.0);
  EXPECT_EQ(empirical_cf(xs, PAdicNumber::zero(2)), std::complex<double>(1.0));
}

TEST(EmpiricalCf, SymmetricSamplerHasSmallImaginaryPart) {
  const Sampler s = Sampler::radial(RadialCharFn::stable({1.0, 1.0, 3}), -6);
  for (std::size_t n : {1000u, 16000u}) {
    std::vector<PAdicNumber> xs;
    for (std::size_t r = 0; r < n; ++r) {
      RandomStream rng(11, r);
      xs.push_back(s.draw(rng));
    }
    for (int k = -2; k <= 2; ++k) {
      const auto t = PAdicNumber::from_integer(1, 3).shifted(k);
      EXPECT_LT(std::abs(empirical_cf(xs, t).imag()), 4.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}
