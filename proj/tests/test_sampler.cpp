#include <gtest/gtest.h>

#include <cmath>

#include "padic/sampler.hpp"

using namespace padic;

namespace {

PAdicNumber q(long long m, long long n, int p) { return PAdicNumber::from_rational(m, n, p); }

std::vector<PAdicNumber> draws(const Sampler& s, std::size_t n, std::uint64_t seed) {
  std::vector<PAdicNumber> out;
  for (std::size_t r = 0; r < n; ++r) {
    RandomStream rng(seed, r);
    out.push_back(s.draw(rng));
  }
  return out;
}

// fraction of 4-sigma agreements with the exact ball probabilities
void expect_ball_frequencies(const Sampler& s, const RadialCharFn& g, const std::vector<Ball>& balls, std::size_t n,
                             std::uint64_t seed) {
  const auto xs = draws(s, n, seed);
  for (const Ball& b : balls) {
    std::size_t hits = 0;
    for (const auto& x : xs) hits += b.contains(x);
    const double prob = ball_probability(g, b).value, freq = double(hits) / double(n);
    EXPECT_LE(std::abs(freq - prob), 4 * std::sqrt(prob * (1 - prob) / double(n)) + 1e-12) << b.to_string();
  }
}

}  // namespace

TEST(Sampler, DrawsCarryTheResolution) {
  const Sampler s = Sampler::radial(RadialCharFn::stable({1.0, 1.0, 3}), -5);
  for (const auto& x : draws(s, 200, 1)) EXPECT_EQ(x.absolute_precision(), 5);
  const Sampler h = Sampler::haar(Ball(q(1, 3, 3), -1), -4);
  for (const auto& x : draws(h, 200, 1)) {
    EXPECT_TRUE(Ball(q(1, 3, 3), -1).contains(x));
    EXPECT_EQ(x.absolute_precision(), 4);
  }
}

TEST(Sampler, PointMass) {
  const Sampler s = Sampler::point_mass(q(7, 2, 2), -6);
  RandomStream rng(1, 0);
  EXPECT_TRUE(congruent(s.draw(rng), q(7, 2, 2)));
  EXPECT_THROW(Sampler::point_mass(PAdicNumber::from_digits(2, 0, {1, 1}), -6), PrecisionError);
}

TEST(Sampler, HaarFirstDigitIsUniform) {
  const int p = 5, n = 25000;
  const Sampler s = Sampler::haar(Ball(PAdicNumber::zero(p), 0), -3);
  std::vector<int> counts(p);
  for (const auto& x : draws(s, n, 3)) ++counts[static_cast<std::size_t>(x.digit_at(0))];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / p) * (c - n / p) / double(n / p);
  EXPECT_LT(chi2, 13.28);  // 1% level, 4 degrees of freedom
}

TEST(Sampler, RadialFirstDigitOnSpheresIsUniform) {
  const int p = 5, n = 40000;
  const Sampler s = Sampler::radial(RadialCharFn::stable({1.0, 0.7, p}), -8);
  std::vector<std::vector<int>> counts(3, std::vector<int>(p));
  for (const auto& x : draws(s, n, 4)) {
    if (x.is_zero() || x.valuation() < -1 || x.valuation() > 1) continue;
    ++counts[static_cast<std::size_t>(x.valuation() + 1)][static_cast<std::size_t>(x.digit_at(x.valuation()))];
  }
  for (const auto& c : counts) {
    EXPECT_EQ(c[0], 0);
    const double total = c[1] + c[2] + c[3] + c[4];
    ASSERT_GT(total, 1000);
    double chi2 = 0.0;
    for (int d = 1; d < p; ++d) chi2 += (c[d] - total / 4) * (c[d] - total / 4) / (total / 4);
    EXPECT_LT(chi2, 11.34);  // 1% level, 3 degrees of freedom
  }
}

TEST(Sampler, RadialMatchesBallProbabilities) {
  const auto g = RadialCharFn::stable({1.0, 0.7, 3});
  const Sampler s = Sampler::radial(g, -4);
  expect_ball_frequencies(s, g, {Ball(PAdicNumber::zero(3), 0), Ball(q(1, 1, 3), -1), Ball(q(1, 3, 3), -2), Ball(PAdicNumber::zero(3), 2)},
                          20000, 5);
}

TEST(Sampler, CompoundPoissonJumpRate) {
  // Phi(M_{-3,inf}) = sum over N >= -2 of (2/3) 2^-N = 16/3
  const Sampler s = Sampler::compound_poisson(make_example_measure(1.0, 1.0, 2), -3);
  EXPECT_NEAR(s.jump_rate(), 16.0 / 3, 1e-14);
}

TEST(Sampler, CompoundPoissonMatchesStableLaw) {
  const auto g = RadialCharFn::stable({1.0, 1.0, 2});
  const Sampler s = Sampler::compound_poisson(make_example_measure(1.0, 1.0, 2), -4);
  expect_ball_frequencies(s, g,
                          {Ball(PAdicNumber::zero(2), 0), Ball(PAdicNumber::zero(2), -4), Ball(q(1, 1, 2), -2),
                           Ball(q(1, 4, 2), -1), Ball(PAdicNumber::zero(2), 3)},
                          20000, 6);
}

TEST(Sampler, CompoundPoissonAsymmetricGamma) {
  // gamma0 = -3 with unequal weights: the law is not symmetric, so compare complex cf values
  const SelfSimilarLevyMeasure<double> m(3, 0.5, -3, 1, {{{Ball(q(1, 1, 3), -1), 0.25}, {Ball(q(2, 1, 3), -1), 1.0}}});
  const Sampler s = Sampler::compound_poisson(m, -2);
  const std::size_t n = 20000;
  const auto xs = draws(s, n, 8);
  bool saw_imaginary = false;
  for (int k = -2; k <= 2; ++k)
    for (long long u : {1, 2, 5}) {
      const auto t = PAdicNumber::from_integer(u, 3).shifted(k);
      const auto want = cf_from_levy(m, t);
      saw_imaginary = saw_imaginary || std::abs(want.imag()) > 0.05;
      EXPECT_LE(std::abs(empirical_cf(xs, t) - want), 4 * std::sqrt(2.0 / double(n))) << to_display_string(t);
    }
  EXPECT_TRUE(saw_imaginary);
}
