#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "padic/random.hpp"

using namespace padic;

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST(Philox, KnownAnswers) {
  using C = std::array<std::uint32_t, 4>;
  using K = std::array<std::uint32_t, 2>;
  EXPECT_EQ(philox4x32(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, AddressedBySeedAndReplicate) {
  RandomStream a(5, 9), b(5, 9), c(5, 10), d(6, 9);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    vd.push_back(d.next_u64());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  EXPECT_NE(va, vd);
}

TEST(RandomStream, UniformIntIsUnbiased) {
  RandomStream rng(1, 0);
  const int n = 7, draws = 70000;
  std::vector<int> counts(n);
  for (int i = 0; i < draws; ++i) ++counts[rng.uniform_int(n)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - draws / n) * (c - draws / n) / double(draws / n);
  EXPECT_LT(chi2, 16.81);  // 1% critical value, 6 degrees of freedom
}

TEST(RandomStream, UniformRange) {
  RandomStream rng(2, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(rng.uniform_pos(), 0.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST(RandomStream, GeometricMean) {
  RandomStream rng(3, 0);
  const double q = 0.4;
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.geometric(q));
  const double mean = q / (1 - q), var = q / ((1 - q) * (1 - q));
  EXPECT_NEAR(sum / n, mean, 4 * std::sqrt(var / n));
}

class PoissonMean : public ::testing::TestWithParam<double> {};

TEST_P(PoissonMean, MatchesMeanAndVariance) {
  const double lambda = GetParam();
  RandomStream rng(4, static_cast<std::uint64_t>(lambda * 10));
  const int n = 50000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng.poisson(lambda));
    s += x;
    s2 += x * x;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, lambda, 4 * std::sqrt(lambda / n));
  EXPECT_NEAR(var / lambda, 1.0, 0.05);
}

INSTANTIATE_TEST_SUITE_P(SmallAndLarge, PoissonMean, ::testing::Values(0.3, 5.3333, 29.0, 31.0, 400.0));
