// Randomized invariants.  Generators are seeded streams, so failures reproduce.
#include <gtest/gtest.h>

#include <algorithm>

#include "padic/acceptance.hpp"

using namespace padic;
using acceptance::random_measure;
using acceptance::random_padic;

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7};

int random_prime(RandomStream& rng) { return kPrimes[rng.uniform_int(4)]; }

// exact rational centers m p^-s, so any radius is resolvable
Ball random_ball(RandomStream& rng, int p) {
  const int r = static_cast<int>(rng.uniform_int(7)) - 4;
  const long long m = static_cast<long long>(rng.uniform_int(729));
  const int s = static_cast<int>(rng.uniform_int(5));
  return Ball(m == 0 ? PAdicNumber::zero(p) : PAdicNumber::from_integer(m, p, 64).shifted(-s), r);
}

}  // namespace

TEST(Properties, UltrametricAndMultiplicative) {
  RandomStream rng(101, 0);
  for (int i = 0; i < 3000; ++i) {
    const int p = random_prime(rng);
    const auto x = random_padic(rng, p), y = random_padic(rng, p);
    const auto s = x + y;
    ASSERT_LE(s.abs(), std::max(x.abs(), y.abs()));
    if (x.abs() != y.abs()) {
      ASSERT_EQ(s.abs(), std::max(x.abs(), y.abs()));
    }
    ASSERT_EQ((x * y).abs(), x.abs() * y.abs());
  }
}

TEST(Properties, CharacterIsAHomomorphism) {
  RandomStream rng(102, 0);
  for (int i = 0; i < 3000; ++i) {
    const int p = random_prime(rng);
    const auto x = random_padic(rng, p), y = random_padic(rng, p);
    ASSERT_EQ(character_phase(x + y), character_phase(x) + character_phase(y));
    ASSERT_EQ(character_phase(-x), -character_phase(x));
  }
}

TEST(Properties, CharacterIsLocallyConstant) {
  RandomStream rng(103, 0);
  for (int i = 0; i < 3000; ++i) {
    const int p = random_prime(rng);
    const auto x = random_padic(rng, p), z = random_padic(rng, p, 0, 8);
    ASSERT_EQ(character_phase(x + z), character_phase(x));
  }
}

TEST(Properties, FieldIdentities) {
  RandomStream rng(104, 0);
  for (int i = 0; i < 2000; ++i) {
    const int p = random_prime(rng);
    const auto x = random_padic(rng, p), y = random_padic(rng, p);
    ASSERT_TRUE(congruent((x + y) - y, x));
    ASSERT_TRUE(congruent(x * y, y * x));
    if (!x.is_zero()) {
      ASSERT_TRUE(congruent(x * x.inverse(), PAdicNumber::from_integer(1, p, x.precision())));
    }
  }
}

TEST(Properties, BallsNeverPartiallyOverlap) {
  RandomStream rng(105, 0);
  for (int i = 0; i < 3000; ++i) {
    const int p = rng.uniform_int(2) ? 2 : 3;
    const Ball a = random_ball(rng, p), b = random_ball(rng, p);
    const int relations = a.contains(b) + b.contains(a) + a.disjoint(b);
    ASSERT_GE(relations, 1);
    if (a.disjoint(b)) {
      ASSERT_EQ(relations, 1);
    }
    // points of b land in a when b sits inside a, and never when they are disjoint
    const PAdicNumber point = b.contains_zero() ? PAdicNumber::zero(p) : b.center().padded(40);
    if (a.contains(b)) {
      ASSERT_TRUE(a.contains(point));
    }
    if (a.disjoint(b)) {
      ASSERT_FALSE(a.contains(point));
    }
  }
}

TEST(Properties, HaarMeasureIgnoresOrderAndRedundancy) {
  RandomStream rng(106, 0);
  for (int i = 0; i < 300; ++i) {
    const int p = rng.uniform_int(2) ? 2 : 3;
    std::vector<Ball> balls;
    for (int k = 0; k < 6; ++k) balls.push_back(random_ball(rng, p));
    const Rational m = haar_measure(normalize(balls, p));
    auto shuffled = balls;
    for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.uniform_int(k)]);
    shuffled.push_back(balls[0].children().front());
    shuffled.push_back(balls[1]);
    ASSERT_EQ(haar_measure(normalize(shuffled, p)), m);
    const int k = static_cast<int>(rng.uniform_int(7)) - 3;
    const auto a = PAdicNumber::from_rational(1 + p * static_cast<long long>(rng.uniform_int(50)), 1 + p, p, 80).shifted(k);
    ASSERT_EQ(haar_measure(scaled(normalize(balls, p), a)), p_power<Rational>(p, -k) * m);
  }
}

TEST(Properties, SelfSimilarSphereMasses) {
  RandomStream rng(107, 0);
  for (int i = 0; i < 20; ++i) {
    const auto m = random_measure(rng);
    for (int n = -4; n <= 4; ++n) ASSERT_EQ(m.sphere_mass(n + m.j()), m.beta() * m.sphere_mass(n));
    ASSERT_TRUE(validate_scaling(m, 10, 1000 + static_cast<std::uint64_t>(i)).ok());
  }
}

TEST(Properties, ExponentScalingHoldsExactly) {
  RandomStream rng(108, 0);
  for (int i = 0; i < 8; ++i) {
    const auto m = random_measure(rng);
    const auto g = m.gamma0();
    for (int k = -4; k <= 4; ++k) {
      const auto t = PAdicNumber::from_integer(1 + m.prime(), m.prime()).shifted(k);
      ASSERT_EQ(levy_exponent_sum(m, g * t), m.beta() * levy_exponent_sum(m, t));
    }
  }
}

TEST(Properties, CfNeverVanishes) {
  RandomStream rng(109, 0);
  for (int i = 0; i < 8; ++i) {
    const auto m = to_double_measure(random_measure(rng));
    for (int k = -5; k <= 5; ++k) {
      const auto t = PAdicNumber::from_integer(1, m.prime()).shifted(k);
      // log |f(t)| >= -2 Phi(M_{v(t),inf}), a finite bound
      const double mass = measure_mass(m, TailSet{t.valuation()});
      ASSERT_TRUE(std::isfinite(mass));
      ASSERT_GE(levy_exponent(m, t).real(), -2.0 * mass * (1 + 1e-14));
    }
  }
}
