#pragma once

// Finite-precision p-adic numbers.
//
// A nonzero value is stored in canonical form
//
//     x = p^v * (d_0 + d_1 p + ... + d_{K-1} p^{K-1}),   d_0 != 0,
//
// and is known modulo p^{v+K} (its absolute precision).  Zero carries the
// absolute precision to which it is known; an exact zero uses kExactPrecision.

#include <algorithm>
#include <climits>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padic/phase.hpp"

namespace padic {

inline constexpr int kDefaultPrecision = 48;
inline constexpr int kExactPrecision = INT_MAX;
inline constexpr int kZeroValuation = INT_MAX;

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require_prime(long long p) {
  if (!is_prime(p) || p > 46337)
    throw std::invalid_argument("not a supported prime: " + std::to_string(p));
}

/// |x|_p as an exact power of p (or zero).
struct AbsoluteValue {
  int prime = 2;
  bool zero = true;
  int exponent = 0;  // |x|_p = p^exponent when !zero

  double to_double() const;

  friend bool operator==(const AbsoluteValue& a, const AbsoluteValue& b) {
    if (a.zero || b.zero) return a.zero == b.zero;
    return a.exponent == b.exponent;
  }
  friend std::strong_ordering operator<=>(const AbsoluteValue& a, const AbsoluteValue& b) {
    if (a.zero || b.zero) return static_cast<int>(!a.zero) <=> static_cast<int>(!b.zero);
    return a.exponent <=> b.exponent;
  }
  friend AbsoluteValue operator*(const AbsoluteValue& a, const AbsoluteValue& b) {
    if (a.zero || b.zero) return {a.prime, true, 0};
    return {a.prime, false, a.exponent + b.exponent};
  }
};

inline double int_pow(double base, int e) {
  double r = 1.0;
  double b = e < 0 ? 1.0 / base : base;
  for (unsigned n = static_cast<unsigned>(e < 0 ? -(long long)e : e); n; n >>= 1) {
    if (n & 1u) r *= b;
    b *= b;
  }
  return r;
}

inline double AbsoluteValue::to_double() const {
  return zero ? 0.0 : int_pow(static_cast<double>(prime), exponent);
}

class PAdicNumber {
 public:
  PAdicNumber() = default;

  static PAdicNumber zero(int p, int absolute_precision = kExactPrecision) {
    PAdicNumber z;
    z.prime_ = p;
    z.zero_precision_ = absolute_precision;
    return z;
  }

  /// Builds p^valuation * sum digits[i] p^i; leading zero digits are folded
  /// into the valuation.  The result is known modulo p^{valuation + digits.size()}.
  static PAdicNumber from_digits(int p, int valuation, std::vector<int> digits) {
    require_prime(p);
    for (int d : digits)
      if (d < 0 || d >= p) throw std::invalid_argument("digit out of range for p=" + std::to_string(p));
    return canonical(p, valuation, std::move(digits));
  }

  static PAdicNumber from_integer(long long n, int p, int precision = kDefaultPrecision) {
    return from_rational(n, 1, p, precision);
  }

  static PAdicNumber from_rational(long long numer, long long denom, int p,
                                   int precision = kDefaultPrecision);

  int prime() const { return prime_; }
  bool is_zero() const { return digits_.empty(); }
  bool is_exact_zero() const { return is_zero() && zero_precision_ == kExactPrecision; }
  int valuation() const { return is_zero() ? kZeroValuation : valuation_; }
  const std::vector<int>& digits() const { return digits_; }
  /// Number of known digits (relative precision).
  int precision() const { return static_cast<int>(digits_.size()); }
  /// x is known modulo p^absolute_precision().
  int absolute_precision() const {
    return is_zero() ? zero_precision_ : valuation_ + precision();
  }

  /// Coefficient of p^position.
  int digit_at(int position) const {
    if (position >= absolute_precision())
      throw PrecisionError("digit at p^" + std::to_string(position) + " is not known");
    if (is_zero() || position < valuation_) return 0;
    return digits_[static_cast<std::size_t>(position - valuation_)];
  }

  /// Reduces modulo p^absolute_precision (drops digits at and above it).
  PAdicNumber truncated(int absolute_precision) const {
    if (absolute_precision >= this->absolute_precision()) return *this;
    if (is_zero() || absolute_precision <= valuation_) return zero(prime_, absolute_precision);
    std::vector<int> d(digits_.begin(), digits_.begin() + (absolute_precision - valuation_));
    return canonical(prime_, valuation_, std::move(d));
  }

  /// Keeps at most `relative` digits.
  PAdicNumber with_precision(int relative) const {
    if (is_zero() || relative >= precision()) return *this;
    return truncated(valuation_ + relative);
  }

  /// Extends the known window with zero digits up to p^absolute_precision,
  /// i.e. reads the finite expansion as an exact value.
  PAdicNumber padded(int absolute_precision) const {
    if (absolute_precision <= this->absolute_precision()) return *this;
    if (is_zero()) return zero(prime_, absolute_precision);
    PAdicNumber r = *this;
    r.digits_.resize(static_cast<std::size_t>(absolute_precision - valuation_), 0);
    return r;
  }

  /// Multiplies by p^k.
  PAdicNumber shifted(int k) const {
    PAdicNumber r = *this;
    if (is_zero()) {
      if (zero_precision_ != kExactPrecision) r.zero_precision_ += k;
    } else {
      r.valuation_ += k;
    }
    return r;
  }

  AbsoluteValue abs() const { return {prime_, is_zero(), is_zero() ? 0 : -valuation_}; }

  PAdicNumber operator-() const;
  friend PAdicNumber operator+(const PAdicNumber& x, const PAdicNumber& y);
  friend PAdicNumber operator-(const PAdicNumber& x, const PAdicNumber& y) { return x + (-y); }
  friend PAdicNumber operator*(const PAdicNumber& x, const PAdicNumber& y);
  PAdicNumber inverse() const;
  friend PAdicNumber operator/(const PAdicNumber& x, const PAdicNumber& y) { return x * y.inverse(); }

  PAdicNumber& operator+=(const PAdicNumber& y) { return *this = *this + y; }
  PAdicNumber& operator-=(const PAdicNumber& y) { return *this = *this - y; }
  PAdicNumber& operator*=(const PAdicNumber& y) { return *this = *this * y; }

  /// Structural equality: same prime, valuation, digits and precision.
  friend bool operator==(const PAdicNumber&, const PAdicNumber&) = default;

  /// Canonical textual form `p^<v> * [d0,d1,...]`; exact zero prints as `0`.
  std::string to_string() const;

 private:
  static PAdicNumber canonical(int p, int valuation, std::vector<int> digits) {
    std::size_t first = 0;
    while (first < digits.size() && digits[first] == 0) ++first;
    if (first == digits.size())
      return zero(p, valuation + static_cast<int>(digits.size()));
    PAdicNumber r;
    r.prime_ = p;
    r.valuation_ = valuation + static_cast<int>(first);
    r.digits_.assign(digits.begin() + static_cast<std::ptrdiff_t>(first), digits.end());
    r.zero_precision_ = kExactPrecision;
    return r;
  }

  static void check_same_prime(const PAdicNumber& x, const PAdicNumber& y) {
    if (x.prime_ != y.prime_)
      throw std::invalid_argument("mismatched primes " + std::to_string(x.prime_) + " and " +
                                  std::to_string(y.prime_));
  }

  int prime_ = 2;
  int valuation_ = 0;
  std::vector<int> digits_;
  int zero_precision_ = kExactPrecision;
};

namespace detail {

inline long long mod_inverse(long long a, long long p) {
  long long t = 0, new_t = 1, r = p, new_r = ((a % p) + p) % p;
  while (new_r != 0) {
    long long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("not invertible mod p");
  return (t % p + p) % p;
}

}  // namespace detail

inline PAdicNumber PAdicNumber::from_rational(long long numer, long long denom, int p, int precision) {
  require_prime(p);
  if (precision <= 0) throw std::invalid_argument("precision must be positive");
  if (denom == 0) throw std::invalid_argument("zero denominator");
  if (numer == 0) return zero(p);
  __int128 m = numer, n = denom;
  if (n < 0) {
    m = -m;
    n = -n;
  }
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  while (n % p == 0) {
    n /= p;
    --v;
  }
  const long long inv_n = detail::mod_inverse(static_cast<long long>(n % p), p);
  std::vector<int> digits(static_cast<std::size_t>(precision));
  __int128 r = m;
  for (int i = 0; i < precision; ++i) {
    long long r_mod = static_cast<long long>(((r % p) + p) % p);
    int d = static_cast<int>((r_mod * inv_n) % p);
    digits[static_cast<std::size_t>(i)] = d;
    r = (r - static_cast<__int128>(d) * n) / p;
  }
  return canonical(p, v, std::move(digits));
}

inline PAdicNumber PAdicNumber::operator-() const {
  if (is_zero()) return *this;
  PAdicNumber r = *this;
  r.digits_[0] = prime_ - digits_[0];
  for (std::size_t i = 1; i < digits_.size(); ++i) r.digits_[i] = prime_ - 1 - digits_[i];
  return r;
}

inline PAdicNumber operator+(const PAdicNumber& x, const PAdicNumber& y) {
  PAdicNumber::check_same_prime(x, y);
  const int p = x.prime_;
  const int abs_prec = std::min(x.absolute_precision(), y.absolute_precision());
  if (x.is_zero() && y.is_zero()) return PAdicNumber::zero(p, abs_prec);
  if (x.is_zero()) return y.truncated(abs_prec);
  if (y.is_zero()) return x.truncated(abs_prec);
  const int lo = std::min(x.valuation_, y.valuation_);
  if (lo >= abs_prec) return PAdicNumber::zero(p, abs_prec);
  std::vector<int> out(static_cast<std::size_t>(abs_prec - lo));
  int carry = 0;
  for (int pos = lo; pos < abs_prec; ++pos) {
    int s = carry;
    if (pos >= x.valuation_) s += x.digits_[static_cast<std::size_t>(pos - x.valuation_)];
    if (pos >= y.valuation_) s += y.digits_[static_cast<std::size_t>(pos - y.valuation_)];
    carry = s / p;
    out[static_cast<std::size_t>(pos - lo)] = s % p;
  }
  return PAdicNumber::canonical(p, lo, std::move(out));
}

inline PAdicNumber operator*(const PAdicNumber& x, const PAdicNumber& y) {
  PAdicNumber::check_same_prime(x, y);
  const int p = x.prime_;
  if (x.is_exact_zero() || y.is_exact_zero()) return PAdicNumber::zero(p);
  if (x.is_zero() || y.is_zero()) {
    // a zero known mod p^A times a value of valuation v is known mod p^{A+v}
    long long prec = x.is_zero() ? (long long)x.zero_precision_ +
                                       (y.is_zero() ? y.zero_precision_ : y.valuation_)
                                 : (long long)y.zero_precision_ + x.valuation_;
    return PAdicNumber::zero(p, static_cast<int>(std::clamp<long long>(prec, INT_MIN + 1, INT_MAX - 1)));
  }
  const std::size_t k = std::min(x.digits_.size(), y.digits_.size());
  std::vector<long long> acc(k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    const long long da = x.digits_[a];
    if (da == 0) continue;
    for (std::size_t b = 0; a + b < k; ++b) acc[a + b] += da * y.digits_[b];
  }
  std::vector<int> out(k);
  long long carry = 0;
  for (std::size_t i = 0; i < k; ++i) {
    long long s = acc[i] + carry;
    out[i] = static_cast<int>(s % p);
    carry = s / p;
  }
  return PAdicNumber::canonical(p, x.valuation_ + y.valuation_, std::move(out));
}

inline PAdicNumber PAdicNumber::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  const int p = prime_;
  const std::size_t k = digits_.size();
  const long long inv0 = detail::mod_inverse(digits_[0], p);
  // long division of 1 by the unit part, digit by digit
  std::vector<long long> rem(k, 0);
  rem[0] = 1;
  std::vector<int> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    long long ri = ((rem[i] % p) + p) % p;
    int q = static_cast<int>((ri * inv0) % p);
    out[i] = q;
    if (q == 0) continue;
    long long borrow = 0;
    for (std::size_t j = i; j < k; ++j) {
      long long s = rem[j] - static_cast<long long>(q) * digits_[j - i] - borrow;
      long long m = ((s % p) + p) % p;
      borrow = (m - s) / p;
      rem[j] = m;
    }
  }
  return canonical(p, -valuation_, std::move(out));
}

inline std::string PAdicNumber::to_string() const {
  if (is_exact_zero()) return "0";
  std::string s = "p^" + std::to_string(is_zero() ? zero_precision_ : valuation_) + " * [";
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(digits_[i]);
  }
  return s + "]";
}

// Free-function spellings of the field operations.

inline PAdicNumber from_rational(long long numer, long long denom, int p, int precision = kDefaultPrecision) {
  return PAdicNumber::from_rational(numer, denom, p, precision);
}
inline PAdicNumber add(const PAdicNumber& x, const PAdicNumber& y) { return x + y; }
inline PAdicNumber sub(const PAdicNumber& x, const PAdicNumber& y) { return x - y; }
inline PAdicNumber negate(const PAdicNumber& x) { return -x; }
inline PAdicNumber mul(const PAdicNumber& x, const PAdicNumber& y) { return x * y; }
inline PAdicNumber invert(const PAdicNumber& x) { return x.inverse(); }
inline AbsoluteValue abs_val(const PAdicNumber& x) { return x.abs(); }

/// x^n for any integer n (negative n inverts).
inline PAdicNumber power(const PAdicNumber& x, long long n) {
  PAdicNumber base = n < 0 ? x.inverse() : x;
  unsigned long long e = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
  PAdicNumber r = PAdicNumber::from_integer(1, x.prime(), std::max(1, x.precision()));
  for (; e; e >>= 1) {
    if (e & 1ull) r *= base;
    if (e > 1) base *= base;
  }
  return r;
}

/// True when x - y vanishes at the precision both are known to.
inline bool congruent(const PAdicNumber& x, const PAdicNumber& y) { return (x - y).is_zero(); }

/// The p-adic fractional part {x}_p as an exact phase k/p^m.
inline Phase frac_part(const PAdicNumber& x) {
  const int p = x.prime();
  if (x.is_zero()) {
    if (x.absolute_precision() < 0)
      throw PrecisionError("fractional part of a zero known only mod p^" +
                           std::to_string(x.absolute_precision()));
    return Phase(p);
  }
  if (x.valuation() >= 0) return Phase(p);
  if (x.absolute_precision() < 0)
    throw PrecisionError("fractional part needs digits down to p^-1; value known only mod p^" +
                         std::to_string(x.absolute_precision()));
  const int m = -x.valuation();
  Phase::Numerator k = 0;
  for (int i = m - 1; i >= 0; --i) k = k * static_cast<unsigned>(p) + static_cast<unsigned>(x.digits()[static_cast<std::size_t>(i)]);
  return Phase::make(p, k, m);
}

/// chi(x) = exp(2 pi i {x}_p), returned as its exact phase.
inline Phase character_phase(const PAdicNumber& x) { return frac_part(x); }

/// Exact rational value of a finite expansion, when it fits in 64 bits.
/// Trailing zero digits are ignored; negative numbers (infinite p-1 tails) yield nullopt.
inline std::optional<std::pair<long long, long long>> try_rational(const PAdicNumber& x) {
  if (x.is_zero()) return std::pair<long long, long long>{0, 1};
  const auto& d = x.digits();
  std::size_t n = d.size();
  while (n > 0 && d[n - 1] == 0) --n;
  __int128 value = 0;
  const __int128 limit = (__int128)1 << 62;
  for (std::size_t i = n; i-- > 0;) {
    value = value * x.prime() + d[i];
    if (value > limit) return std::nullopt;
  }
  __int128 denom = 1;
  for (int v = x.valuation(); v < 0; ++v) {
    denom *= x.prime();
    if (denom > limit) return std::nullopt;
  }
  for (int v = x.valuation(); v > 0; --v) {
    value *= x.prime();
    if (value > limit) return std::nullopt;
  }
  return std::pair<long long, long long>{static_cast<long long>(value), static_cast<long long>(denom)};
}

/// "m/n" (or "m") for finite expansions, the digit form otherwise.
inline std::string to_display_string(const PAdicNumber& x) {
  if (!x.is_zero() || x.is_exact_zero()) {
    if (auto r = try_rational(x)) {
      if (r->second == 1) return std::to_string(r->first);
      return std::to_string(r->first) + "/" + std::to_string(r->second);
    }
  }
  return x.to_string();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline long long parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw std::invalid_argument("expected an integer");
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(std::string(s), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  if (used != s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

inline std::pair<long long, long long> parse_fraction(std::string_view s) {
  s = trim(s);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return {parse_int(s), 1};
  return {parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1))};
}

}  // namespace detail

/// Parses `p^<v> * [d0,...]`, `0`, `m/n @ p=<p>` or a bare `m/n` (using `p`).
/// `p == 0` means the prime must come from the text.
inline PAdicNumber parse_padic(std::string_view text, int p = 0, int precision = kDefaultPrecision) {
  using detail::trim;
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty p-adic literal");
  if (auto at = s.find('@'); at != std::string_view::npos) {
    std::string_view rest = trim(s.substr(at + 1));
    if (rest.substr(0, 2) != "p=") throw std::invalid_argument("expected 'p=' after '@'");
    const int q = static_cast<int>(detail::parse_int(rest.substr(2)));
    if (p != 0 && q != p)
      throw std::invalid_argument("literal prime " + std::to_string(q) + " does not match " + std::to_string(p));
    auto [m, n] = detail::parse_fraction(s.substr(0, at));
    return PAdicNumber::from_rational(m, n, q, precision);
  }
  if (s.find('[') != std::string_view::npos) {
    if (p == 0) throw std::invalid_argument("digit form needs a known prime");
    if (s.substr(0, 2) != "p^") throw std::invalid_argument("digit form must start with 'p^'");
    auto star = s.find('*');
    auto open = s.find('[');
    auto close = s.find(']');
    if (star == std::string_view::npos || close == std::string_view::npos || open > close || star > open)
      throw std::invalid_argument("malformed digit form '" + std::string(s) + "'");
    const int v = static_cast<int>(detail::parse_int(s.substr(2, star - 2)));
    if (!trim(s.substr(close + 1)).empty()) throw std::invalid_argument("trailing characters after ']'");
    std::vector<int> digits;
    std::string_view body = trim(s.substr(open + 1, close - open - 1));
    while (!body.empty()) {
      auto comma = body.find(',');
      digits.push_back(static_cast<int>(detail::parse_int(body.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    require_prime(p);
    if (digits.empty()) return PAdicNumber::zero(p, v);
    return PAdicNumber::from_digits(p, v, std::move(digits));
  }
  if (p == 0) throw std::invalid_argument("rational literal needs '@ p=<p>'");
  if (s == "0") {
    require_prime(p);
    return PAdicNumber::zero(p);
  }
  auto [m, n] = detail::parse_fraction(s);
  return PAdicNumber::from_rational(m, n, p, precision);
}

}  // namespace padic
