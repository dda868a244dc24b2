#pragma once

#include <complex>
#include <map>
#include <string>

#include "padic/phase.hpp"
#include "padic/scalar.hpp"

namespace padic {

/// A finite sum  sum_k c_k * exp(2 pi i theta_k)  with exact phases theta_k.
///
/// Values of characters integrated against weighted Haar measure land here, so
/// identities between such integrals can be checked term by term before any
/// floating point is involved.
template <class Scalar>
class CharacterSum {
 public:
  CharacterSum() = default;
  explicit CharacterSum(int p) : prime_(p) {}

  static CharacterSum constant(int p, const Scalar& c) {
    CharacterSum s(p);
    s.add(Phase(p), c);
    return s;
  }

  int prime() const { return prime_; }
  const std::map<Phase, Scalar>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const Phase& phase, const Scalar& coefficient) {
    if (coefficient == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(phase, coefficient);
    if (!inserted) {
      it->second = it->second + coefficient;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  /// Coefficient of the trivial character.
  Scalar constant_term() const {
    auto it = terms_.find(Phase(prime_));
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  CharacterSum& operator+=(const CharacterSum& o) {
    for (const auto& [ph, c] : o.terms_) add(ph, c);
    return *this;
  }
  CharacterSum& operator-=(const CharacterSum& o) {
    for (const auto& [ph, c] : o.terms_) add(ph, Scalar(0) - c);
    return *this;
  }
  friend CharacterSum operator+(CharacterSum a, const CharacterSum& b) { return a += b; }
  friend CharacterSum operator-(CharacterSum a, const CharacterSum& b) { return a -= b; }
  friend CharacterSum operator*(const Scalar& k, const CharacterSum& a) {
    CharacterSum r(a.prime_);
    for (const auto& [ph, c] : a.terms_) r.add(ph, k * c);
    return r;
  }

  /// Multiplies every character by exp(2 pi i shift).
  CharacterSum rotated(const Phase& shift) const {
    CharacterSum r(prime_);
    for (const auto& [ph, c] : terms_) r.add(ph + shift, c);
    return r;
  }

  friend bool operator==(const CharacterSum& a, const CharacterSum& b) { return a.terms_ == b.terms_; }

  /// Complex value.  Conjugate phases are paired before summing, so a sum
  /// that is real at the phase level comes out with imaginary part exactly 0.
  std::complex<double> value() const {
    std::map<Phase, std::pair<Scalar, Scalar>> paired;  // key in [0,1/2]: (c(theta), c(-theta))
    for (const auto& [ph, c] : terms_) {
      if (ph.signed_turns() >= 0) {
        paired[ph].first = paired[ph].first + c;
      } else {
        paired[-ph].second = paired[-ph].second + c;
      }
    }
    double re = 0.0, im = 0.0;
    for (const auto& [ph, cc] : paired) {
      const auto z = ph.to_complex();
      re += to_double(cc.first + cc.second) * z.real();
      const Scalar diff = cc.first - cc.second;
      if (!(diff == Scalar(0))) im += to_double(diff) * z.imag();
    }
    return {re, im};
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [ph, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + scalar_string(c) + ")*e(" + ph.to_string() + ")";
    }
    return s.empty() ? "0" : s;
  }

 private:
  static std::string scalar_string(const Scalar& c) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return std::to_string(c);
    } else {
      return c.str();
    }
  }

  int prime_ = 2;
  std::map<Phase, Scalar> terms_;
};

}  // namespace padic
