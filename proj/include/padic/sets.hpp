#pragma once

// Balls, spheres and compact open subsets of Q_p, with exact Haar measure and
// exact integrals of the additive character over them.

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padic/character_sum.hpp"
#include "padic/padic_number.hpp"
#include "padic/scalar.hpp"

namespace padic {

/// The ball {x : |x - c|_p <= p^radius_exp}.  The center is kept reduced modulo
/// p^{-radius_exp}, so two descriptions of the same ball compare equal.
class Ball {
 public:
  Ball() = default;
  Ball(const PAdicNumber& center, int radius_exp) : radius_exp_(radius_exp) {
    if (center.absolute_precision() < -radius_exp)
      throw PrecisionError("ball center known only mod p^" + std::to_string(center.absolute_precision()) +
                           ", radius needs p^" + std::to_string(-radius_exp));
    center_ = center.truncated(-radius_exp);
  }

  int prime() const { return center_.prime(); }
  const PAdicNumber& center() const { return center_; }
  int radius_exp() const { return radius_exp_; }
  bool contains_zero() const { return center_.is_zero(); }

  /// Index N of the sphere S_N = {|x| = p^N} containing the ball, when it avoids 0.
  int sphere_index() const {
    if (contains_zero()) throw std::domain_error("ball contains 0");
    return -center_.valuation();
  }

  bool contains(const PAdicNumber& x) const {
    if (x.absolute_precision() < -radius_exp_)
      throw PrecisionError("point known too coarsely for ball membership");
    return (x.truncated(-radius_exp_) - center_).is_zero();
  }

  bool contains(const Ball& b) const { return b.radius_exp_ <= radius_exp_ && contains(b.center_); }
  bool disjoint(const Ball& b) const { return !contains(b) && !b.contains(*this); }

  Rational haar_measure() const { return p_power<Rational>(prime(), radius_exp_); }
  template <class Scalar>
  Scalar haar_measure_as() const {
    return p_power<Scalar>(prime(), radius_exp_);
  }

  /// The p sub-balls of radius p^{radius_exp - 1}.
  std::vector<Ball> children() const {
    std::vector<Ball> out;
    const int p = prime();
    out.reserve(static_cast<std::size_t>(p));
    for (int a = 0; a < p; ++a) {
      PAdicNumber offset = a == 0 ? PAdicNumber::zero(p) : PAdicNumber::from_digits(p, -radius_exp_, {a});
      PAdicNumber c = center_.padded(-radius_exp_ + 1) + offset;
      out.emplace_back(c.is_zero() ? PAdicNumber::zero(p) : c, radius_exp_ - 1);
    }
    return out;
  }

  /// The image a*B = B(a c, |a| p^N).
  Ball scaled(const PAdicNumber& a) const {
    if (a.is_zero()) throw std::domain_error("scaling a ball by zero");
    const int shift = -a.valuation();
    PAdicNumber c = center_.is_exact_zero() ? center_ : a * center_;
    if (c.absolute_precision() < -(radius_exp_ + shift))
      throw PrecisionError("scale factor known too coarsely for ball image");
    if (c.is_zero()) c = PAdicNumber::zero(prime());
    return Ball(c, radius_exp_ + shift);
  }

  Ball negated() const { return Ball(center_.is_zero() ? center_ : -center_, radius_exp_); }

  friend bool operator==(const Ball& a, const Ball& b) {
    return a.radius_exp_ == b.radius_exp_ && a.center_ == b.center_;
  }

  std::string to_string() const {
    return "ball(" + (center_.is_zero() ? std::string("0") : to_display_string(center_)) + ", " + std::to_string(radius_exp_) + ")";
  }

 private:
  PAdicNumber center_{};
  int radius_exp_ = 0;
};

namespace detail {

/// Deterministic order: center valuation, then digits, then radius.
inline bool ball_less(const Ball& a, const Ball& b) {
  const int va = a.center().valuation(), vb = b.center().valuation();
  if (va != vb) return va < vb;
  if (a.center().digits() != b.center().digits()) return a.center().digits() < b.center().digits();
  return a.radius_exp() < b.radius_exp();
}

}  // namespace detail

/// A finite union of pairwise disjoint balls, none contained in another,
/// kept sorted.
class CompactOpenSet {
 public:
  CompactOpenSet() = default;
  explicit CompactOpenSet(int p) : prime_(p) {}

  int prime() const { return prime_; }
  const std::vector<Ball>& balls() const { return balls_; }
  bool empty() const { return balls_.empty(); }

  bool contains(const PAdicNumber& x) const {
    return std::any_of(balls_.begin(), balls_.end(), [&](const Ball& b) { return b.contains(x); });
  }

  friend bool operator==(const CompactOpenSet&, const CompactOpenSet&) = default;

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < balls_.size(); ++i) {
      if (i) s += ", ";
      s += balls_[i].to_string();
    }
    return s + "}";
  }

 private:
  friend CompactOpenSet normalize(std::vector<Ball> balls, int p);
  int prime_ = 2;
  std::vector<Ball> balls_;
};

/// Canonical disjoint form of a union of balls: balls contained in another
/// ball are dropped and the rest sorted.
inline CompactOpenSet normalize(std::vector<Ball> balls, int p) {
  for (const Ball& b : balls)
    if (b.prime() != p) throw std::invalid_argument("balls of mixed primes");
  // larger balls first, so nested balls are absorbed by their container
  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) {
    if (a.radius_exp() != b.radius_exp()) return a.radius_exp() > b.radius_exp();
    return detail::ball_less(a, b);
  });
  CompactOpenSet out(p);
  for (const Ball& b : balls) {
    bool covered = std::any_of(out.balls_.begin(), out.balls_.end(), [&](const Ball& k) { return k.contains(b); });
    if (!covered) out.balls_.push_back(b);
  }
  std::sort(out.balls_.begin(), out.balls_.end(), detail::ball_less);
  return out;
}

inline CompactOpenSet normalize(const std::vector<Ball>& balls) {
  if (balls.empty()) throw std::invalid_argument("normalize: empty ball list has no prime; pass it explicitly");
  return normalize(balls, balls.front().prime());
}

inline Rational haar_measure(const CompactOpenSet& m) {
  Rational total = 0;
  for (const Ball& b : m.balls()) total += b.haar_measure();
  return total;
}

/// Partition of the sphere S_N into the (p-1) p^{depth-1} balls of radius p^{N-depth}.
inline std::vector<Ball> split_sphere(int n, int depth, int p) {
  require_prime(p);
  if (depth < 1) throw std::invalid_argument("split_sphere: depth must be >= 1");
  std::vector<Ball> out;
  std::vector<int> digits(static_cast<std::size_t>(depth), 0);
  digits[0] = 1;
  while (true) {
    out.emplace_back(PAdicNumber::from_digits(p, -n, digits), n - depth);
    // odometer over digits[1..], then digits[0] in 1..p-1
    std::size_t i = depth > 1 ? 1 : 0;
    for (;;) {
      if (i == 0) {
        if (++digits[0] < p) break;
        return out;
      }
      if (++digits[i] < p) break;
      digits[i] = 0;
      i = (i + 1 < digits.size()) ? i + 1 : 0;
    }
  }
}

inline CompactOpenSet sphere(int n, int p) { return normalize(split_sphere(n, 1, p), p); }

/// {p^{i+1} <= |x| <= p^l}.
inline CompactOpenSet annulus(int i, int l, int p) {
  if (l <= i) throw std::invalid_argument("annulus(i, l) needs l > i");
  std::vector<Ball> balls;
  for (int n = i + 1; n <= l; ++n) {
    auto s = split_sphere(n, 1, p);
    balls.insert(balls.end(), s.begin(), s.end());
  }
  return normalize(std::move(balls), p);
}

inline CompactOpenSet scaled(const CompactOpenSet& m, const PAdicNumber& a) {
  std::vector<Ball> balls;
  for (const Ball& b : m.balls()) balls.push_back(b.scaled(a));
  return normalize(std::move(balls), m.prime());
}

/// Exact  integral over B of chi(t y) dy:  p^N chi(t c) when |t| p^N <= 1, else 0.
inline CharacterSum<Rational> integrate_char_exact(const Ball& b, const PAdicNumber& t) {
  CharacterSum<Rational> s(b.prime());
  if (!t.is_exact_zero() && t.is_zero())
    throw PrecisionError("integrand point known only to a zero of finite precision");
  if (!t.is_zero() && t.valuation() < b.radius_exp()) return s;  // the character cancels over the ball
  const Phase ph = (t.is_zero() || b.center().is_zero()) ? Phase(b.prime()) : character_phase(t * b.center());
  s.add(ph, b.haar_measure());
  return s;
}

inline CharacterSum<Rational> integrate_char_exact(const CompactOpenSet& m, const PAdicNumber& t) {
  CharacterSum<Rational> s(m.prime());
  for (const Ball& b : m.balls()) s += integrate_char_exact(b, t);
  return s;
}

/// integral over M of chi(t y) dy.
inline std::complex<double> integrate_char(const CompactOpenSet& m, const PAdicNumber& t) {
  return integrate_char_exact(m, t).value();
}

/// A locally constant function with compact support: finitely many disjoint
/// balls with complex values, zero elsewhere.
class StepFunction {
 public:
  struct Piece {
    Ball ball;
    std::complex<double> value;
  };

  StepFunction() = default;
  explicit StepFunction(int p) : prime_(p) {}

  int prime() const { return prime_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  void add_piece(const Ball& b, std::complex<double> value) {
    if (b.prime() != prime_) throw std::invalid_argument("step function piece of another prime");
    for (const Piece& q : pieces_)
      if (!q.ball.disjoint(b)) throw std::invalid_argument("step function pieces must be disjoint");
    pieces_.push_back({b, value});
  }

  static StepFunction indicator(const CompactOpenSet& m) {
    StepFunction f(m.prime());
    for (const Ball& b : m.balls()) f.add_piece(b, 1.0);
    return f;
  }

  std::complex<double> operator()(const PAdicNumber& x) const {
    for (const Piece& q : pieces_)
      if (q.ball.contains(x)) return q.value;
    return 0.0;
  }

 private:
  int prime_ = 2;
  std::vector<Piece> pieces_;
};

/// integral of f(y) chi(t y) dy.
inline std::complex<double> integrate_step(const StepFunction& f, const PAdicNumber& t) {
  std::complex<double> total = 0.0;
  for (const auto& q : f.pieces()) total += q.value * integrate_char_exact(q.ball, t).value();
  return total;
}

/// Fourier transform of the indicator of B(c, p^N), as a step function:
/// p^N chi(xi c) on |xi| <= p^{-N}, resolved on balls where chi(xi c) is constant.
inline StepFunction fourier_transform_of_ball(const Ball& b) {
  const int p = b.prime();
  StepFunction f(p);
  const double mass = to_double(b.haar_measure());
  const int support = -b.radius_exp();  // |xi| <= p^support
  if (b.contains_zero()) {
    f.add_piece(Ball(PAdicNumber::zero(p), support), mass);
    return f;
  }
  // chi(xi c) is constant on balls of radius |c|^{-1}
  const int fine = b.center().valuation();
  const int levels = support - fine;
  std::vector<Ball> frontier{Ball(PAdicNumber::zero(p), support)};
  for (int l = 0; l < levels; ++l) {
    std::vector<Ball> next;
    for (const Ball& q : frontier)
      for (Ball& c : q.children()) next.push_back(std::move(c));
    frontier = std::move(next);
  }
  for (const Ball& q : frontier) {
    const Phase ph = q.center().is_zero() ? Phase(p) : character_phase(q.center() * b.center());
    f.add_piece(q, mass * ph.to_complex());
  }
  return f;
}

namespace detail {

inline std::string_view strip_call(std::string_view s, std::string_view name) {
  s = trim(s);
  if (s.substr(0, name.size()) != name) return {};
  s.remove_prefix(name.size());
  s = trim(s);
  if (s.empty() || s.front() != '(' || s.back() != ')') throw std::invalid_argument("malformed set literal");
  return s.substr(1, s.size() - 2);
}

}  // namespace detail

/// Parses `ball(<center>, <radius-exp>)`, `sphere(<N>)` or `annulus(<i>,<l>)`.
inline CompactOpenSet parse_set(std::string_view text, int p) {
  if (auto args = detail::strip_call(text, "ball"); args.data()) {
    auto comma = args.rfind(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("ball(<center>, <radius-exp>)");
    const int r = static_cast<int>(detail::parse_int(args.substr(comma + 1)));
    PAdicNumber c = parse_padic(args.substr(0, comma), p, std::max(kDefaultPrecision, 8 - r));
    return normalize({Ball(c, r)}, p);
  }
  if (auto args = detail::strip_call(text, "sphere"); args.data())
    return sphere(static_cast<int>(detail::parse_int(args)), p);
  if (auto args = detail::strip_call(text, "annulus"); args.data()) {
    auto comma = args.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("annulus(<i>,<l>)");
    return annulus(static_cast<int>(detail::parse_int(args.substr(0, comma))),
                   static_cast<int>(detail::parse_int(args.substr(comma + 1))), p);
  }
  throw std::invalid_argument("unknown set literal '" + std::string(text) + "'");
}

}  // namespace padic
