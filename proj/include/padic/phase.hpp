#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace padic {

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact rational k/p^m modulo 1, the argument of the additive character.
/// Stored reduced: p does not divide k, or k = m = 0.
class Phase {
 public:
  using Numerator = unsigned __int128;

  explicit Phase(int p = 2) : prime_(p) {}

  static Phase make(int p, Numerator k, int m) {
    const Numerator mod = scale_of(p, m);
    Phase r(p);
    r.num_ = k % mod;
    r.scale_ = m;
    r.reduce();
    return r;
  }

  int prime() const { return prime_; }
  Numerator numerator() const { return num_; }
  int scale() const { return scale_; }
  bool is_zero() const { return num_ == 0; }

  /// p^m, guarded so that phase arithmetic never overflows.
  static Numerator scale_of(int p, int m) {
    Numerator r = 1;
    const Numerator limit = Numerator(1) << 125;
    for (int i = 0; i < m; ++i) {
      r *= static_cast<unsigned>(p);
      if (r > limit) throw PrecisionError("phase denominator p^" + std::to_string(m) + " too large");
    }
    return r;
  }

  friend Phase operator+(const Phase& a, const Phase& b) {
    check(a, b);
    const int p = a.is_zero() ? b.prime_ : a.prime_;
    const int m = std::max(a.scale_, b.scale_);
    const Numerator mod = scale_of(p, m);
    Numerator x = a.num_ * scale_of(p, m - a.scale_);
    Numerator y = b.num_ * scale_of(p, m - b.scale_);
    Phase r(p);
    r.num_ = (x + y) % mod;
    r.scale_ = m;
    r.reduce();
    return r;
  }

  Phase operator-() const {
    if (is_zero()) return *this;
    Phase r = *this;
    r.num_ = scale_of(prime_, scale_) - num_;
    return r;
  }

  friend Phase operator-(const Phase& a, const Phase& b) { return a + (-b); }

  /// n * phase mod 1.
  Phase times(unsigned long long n) const {
    const Numerator mod = scale_of(prime_, scale_);
    Numerator acc = 0, base = num_;
    for (; n; n >>= 1) {
      if (n & 1ull) acc = (acc + base) % mod;
      base = (base + base) % mod;
    }
    Phase r(prime_);
    r.num_ = acc;
    r.scale_ = scale_;
    r.reduce();
    return r;
  }

  friend bool operator==(const Phase& a, const Phase& b) {
    return a.num_ == b.num_ && a.scale_ == b.scale_ && (a.is_zero() || a.prime_ == b.prime_);
  }

  /// Orders by value in [0, 1).
  friend bool operator<(const Phase& a, const Phase& b) {
    const int p = a.is_zero() ? b.prime_ : a.prime_;
    const int m = std::max(a.scale_, b.scale_);
    return a.num_ * scale_of(p, m - a.scale_) < b.num_ * scale_of(p, m - b.scale_);
  }

  /// Signed value in (-1/2, 1/2]; computed so that a phase and its negative give exactly
  /// opposite results.
  long double signed_turns() const {
    if (is_zero()) return 0.0L;
    const Numerator mod = scale_of(prime_, scale_);
    if (num_ * 2 > mod) return -static_cast<long double>(mod - num_) / static_cast<long double>(mod);
    return static_cast<long double>(num_) / static_cast<long double>(mod);
  }

  /// Value in [0, 1).
  long double turns() const {
    const long double s = signed_turns();
    return s < 0 ? s + 1.0L : s;
  }

  /// exp(2 pi i * phase).
  std::complex<double> to_complex() const {
    if (is_zero()) return {1.0, 0.0};
    // exact values at the quarter turns
    const Numerator mod = scale_of(prime_, scale_);
    if (num_ * 2 == mod) return {-1.0, 0.0};
    if (num_ * 4 == mod) return {0.0, 1.0};
    if (num_ * 4 == mod * 3) return {0.0, -1.0};
    const long double angle = 2.0L * std::numbers::pi_v<long double> * signed_turns();
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    return u128_to_string(num_) + "/" + std::to_string(prime_) + "^" + std::to_string(scale_);
  }

  static std::string u128_to_string(Numerator v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    }
    return s;
  }

 private:
  static void check(const Phase& a, const Phase& b) {
    if (a.prime_ != b.prime_ && !a.is_zero() && !b.is_zero())
      throw std::invalid_argument("phases of different primes");
  }

  void reduce() {
    if (num_ == 0) {
      scale_ = 0;
      return;
    }
    while (scale_ > 0 && num_ % static_cast<unsigned>(prime_) == 0) {
      num_ /= static_cast<unsigned>(prime_);
      --scale_;
    }
  }

  int prime_ = 2;
  Numerator num_ = 0;
  int scale_ = 0;
};

}  // namespace padic
