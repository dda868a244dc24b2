#include <gtest/gtest.h>

#include "padic/padic_number.hpp"

using namespace padic;

TEST(PAdicNumber, OneThirdInTwoAdics) {
  // 1/3 = 1 + 2 + 2^3 + 2^5 + ... in Z_2
  const PAdicNumber x = PAdicNumber::from_rational(1, 3, 2, 8);
  EXPECT_EQ(x.valuation(), 0);
  EXPECT_EQ(x.digits(), (std::vector<int>{1, 1, 0, 1, 0, 1, 0, 1}));
}

TEST(PAdicNumber, MinusOneIsAllTopDigits) {
  const PAdicNumber x = PAdicNumber::from_integer(-1, 5, 6);
  EXPECT_EQ(x.digits(), (std::vector<int>{4, 4, 4, 4, 4, 4}));
}

TEST(PAdicNumber, ValuationAndAbsoluteValue) {
  EXPECT_EQ(PAdicNumber::from_integer(12, 2).valuation(), 2);
  EXPECT_DOUBLE_EQ(PAdicNumber::from_integer(12, 2).abs().to_double(), 0.25);
  EXPECT_EQ(PAdicNumber::from_rational(5, 4, 2).valuation(), -2);
  EXPECT_DOUBLE_EQ(PAdicNumber::from_rational(5, 4, 2).abs().to_double(), 4.0);
  EXPECT_EQ(PAdicNumber::from_rational(7, 18, 3).valuation(), -2);
  EXPECT_TRUE(PAdicNumber::zero(3).is_exact_zero());
  EXPECT_EQ(PAdicNumber::zero(3).abs().to_double(), 0.0);
}

TEST(PAdicNumber, ArithmeticMatchesRationals) {
  const int p = 3;
  const auto a = PAdicNumber::from_rational(2, 5, p), b = PAdicNumber::from_rational(-7, 9, p);
  EXPECT_TRUE(congruent(a + b, PAdicNumber::from_rational(-17, 45, p)));
  EXPECT_TRUE(congruent(a * b, PAdicNumber::from_rational(-14, 45, p)));
  EXPECT_TRUE(congruent(a / b, PAdicNumber::from_rational(-18, 35, p)));
  EXPECT_TRUE(congruent(a - a, PAdicNumber::zero(p)));
}

TEST(PAdicNumber, InverseTimesSelfIsOne) {
  const auto x = PAdicNumber::from_integer(3, 5, 20);
  EXPECT_TRUE(congruent(x * x.inverse(), PAdicNumber::from_integer(1, 5)));
  EXPECT_THROW(PAdicNumber::zero(5).inverse(), std::domain_error);
}

TEST(PAdicNumber, PowerWithNegativeExponent) {
  const auto two = PAdicNumber::from_integer(2, 3);
  EXPECT_TRUE(congruent(power(two, 5), PAdicNumber::from_integer(32, 3)));
  EXPECT_TRUE(congruent(power(two, -2) * PAdicNumber::from_integer(4, 3), PAdicNumber::from_integer(1, 3)));
}

TEST(PAdicNumber, FractionalPartAndCharacter) {
  const auto x = PAdicNumber::from_rational(13, 4, 2);  // 13/4 = 3 + 1/4
  const Phase ph = character_phase(x);
  EXPECT_EQ(ph, Phase::make(2, 1, 2));
  const auto z = ph.to_complex();
  EXPECT_EQ(z.real(), 0.0);  // quarter turns are exact
  EXPECT_EQ(z.imag(), 1.0);
  EXPECT_TRUE(character_phase(PAdicNumber::from_integer(17, 2)).is_zero());
}

TEST(PAdicNumber, CharacterNeedsDigitsDownToOne) {
  // known modulo p^-1 only: the fractional part is undetermined
  const auto coarse = PAdicNumber::from_digits(2, -3, {1, 1});
  EXPECT_LT(coarse.absolute_precision(), 0);
  EXPECT_THROW(character_phase(coarse), PrecisionError);
}

TEST(PAdicNumber, ParseFormats) {
  EXPECT_EQ(to_display_string(parse_padic("1/1@p=2")), "1");
  EXPECT_EQ(parse_padic("3/8 @ p=2").valuation(), -3);
  EXPECT_EQ(to_display_string(parse_padic("5/49", 7)), "5/49");
  EXPECT_TRUE(congruent(parse_padic("-5/6", 7) * PAdicNumber::from_integer(6, 7), PAdicNumber::from_integer(-5, 7)));
  EXPECT_TRUE(parse_padic("0", 3).is_exact_zero());
  EXPECT_THROW(parse_padic("1/2"), std::invalid_argument);
  EXPECT_THROW(parse_padic("1/0@p=3"), std::invalid_argument);
  EXPECT_THROW(parse_padic("1@p=4"), std::invalid_argument);
}

TEST(PAdicNumber, DisplayRoundTrip) {
  for (auto [m, n] : {std::pair{5LL, 1LL}, {-3LL, 4LL}, {22LL, 9LL}}) {
    const auto x = PAdicNumber::from_rational(m, n, 3);
    EXPECT_TRUE(congruent(parse_padic(to_display_string(x), 3), x)) << to_display_string(x);
  }
}

TEST(PAdicNumber, RationalRoundTripLosesOnlyLowDigits) {
  // n * from_rational(m, n) - m is small: |.| <= p^-(K - c)
  const int K = 30;
  for (int p : {2, 3, 5, 7})
    for (auto [m, n] : {std::pair{1LL, 3LL}, {-22LL, 7LL}, {5LL, 12LL}, {1000LL, 999LL}}) {
      const auto x = PAdicNumber::from_rational(m, n, p, K);
      const auto r = x * PAdicNumber::from_integer(n, p, K) - PAdicNumber::from_integer(m, p, K);
      EXPECT_TRUE(r.is_zero() || r.valuation() >= K - 4) << p << " " << m << "/" << n;
    }
}

TEST(PAdicNumber, MixingPrimesThrows) {
  EXPECT_THROW(PAdicNumber::from_integer(1, 2) + PAdicNumber::from_integer(1, 3), std::invalid_argument);
  EXPECT_THROW(PAdicNumber::from_integer(1, 4), std::invalid_argument);
}
