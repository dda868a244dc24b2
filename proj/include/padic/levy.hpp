#pragma once

// Self-similar Levy measures on Q_p given by weighted Haar data on the
// fundamental spheres S_0, ..., S_{j-1} (|gamma0| = p^-j) and the scaling law
// Phi(M) = beta * Phi(gamma0 M).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/charfn.hpp"
#include "padic/random.hpp"
#include "padic/sets.hpp"

namespace padic {

/// The point p^-e (u0 + u1 p + ...) with |t| = p^e, read as exact to kDefaultPrecision digits.
inline PAdicNumber probe_point(int p, int e, const std::vector<int>& unit_digits) {
  return PAdicNumber::from_digits(p, -e, unit_digits).padded(-e + kDefaultPrecision);
}

/// Center of a ball read as an exact point, for evaluating functions constant on the ball.
inline PAdicNumber probe_point(const Ball& b) {
  const PAdicNumber& c = b.center();
  return c.is_zero() ? PAdicNumber::zero(c.prime()) : c.padded(c.valuation() + kDefaultPrecision);
}

/// A ball carrying uniform (Haar-proportional) mass; `weight` is the mass of the whole ball.
template <class Scalar>
struct WeightedBall {
  Ball ball;
  Scalar weight{};
};

/// The annulus-to-infinity M_{i,inf} = {|x| > p^i}.
struct TailSet {
  int i = 0;
};

template <class Scalar>
class SelfSimilarLevyMeasure {
 public:
  using Fundamental = std::vector<std::vector<WeightedBall<Scalar>>>;

  /// gamma0 = gamma_num / gamma_den; `fundamental[r]` lists the balls in S_r.
  SelfSimilarLevyMeasure(int p, Scalar beta, long long gamma_num, long long gamma_den, Fundamental fundamental)
      : p_(p), beta_(std::move(beta)), gamma_num_(gamma_num), gamma_den_(gamma_den), fundamental_(std::move(fundamental)) {
    require_prime(p);
    if (gamma_num == 0 || gamma_den == 0) throw std::invalid_argument("gamma0 must be a nonzero rational");
    if (!(beta_ > Scalar(0) && beta_ < Scalar(1))) throw std::invalid_argument("beta must lie in (0, 1)");
    j_ = PAdicNumber::from_rational(gamma_num, gamma_den, p).valuation();
    if (j_ < 1) throw std::invalid_argument("|gamma0|_p must be at most 1/p");
    if (static_cast<int>(fundamental_.size()) > j_)
      throw std::invalid_argument("fundamental data lists " + std::to_string(fundamental_.size()) +
                                  " spheres but |gamma0| = p^-" + std::to_string(j_));
    fundamental_.resize(static_cast<std::size_t>(j_));
    for (int r = 0; r < j_; ++r) {
      auto& balls = fundamental_[static_cast<std::size_t>(r)];
      for (std::size_t a = 0; a < balls.size(); ++a) {
        const Ball& b = balls[a].ball;
        if (b.prime() != p) throw std::invalid_argument("fundamental ball of another prime");
        if (b.contains_zero() || b.sphere_index() != r)
          throw std::invalid_argument(b.to_string() + " is not inside S_" + std::to_string(r));
        if (balls[a].weight < Scalar(0)) throw std::invalid_argument("negative weight on " + b.to_string());
        for (std::size_t c = 0; c < a; ++c)
          if (!b.disjoint(balls[c].ball))
            throw std::invalid_argument("overlapping fundamental balls " + b.to_string() + " and " +
                                        balls[c].ball.to_string());
      }
      std::sort(balls.begin(), balls.end(),
                [](const WeightedBall<Scalar>& x, const WeightedBall<Scalar>& y) { return detail::ball_less(x.ball, y.ball); });
    }
  }

  int prime() const { return p_; }
  const Scalar& beta() const { return beta_; }
  /// |gamma0| = p^-j.
  int j() const { return j_; }
  long long gamma_numerator() const { return gamma_num_; }
  long long gamma_denominator() const { return gamma_den_; }
  std::string gamma_string() const {
    return gamma_den_ == 1 ? std::to_string(gamma_num_) : std::to_string(gamma_num_) + "/" + std::to_string(gamma_den_);
  }
  const Fundamental& fundamental() const { return fundamental_; }

  /// gamma0 to the given relative precision.
  PAdicNumber gamma0(int precision = kDefaultPrecision) const {
    return PAdicNumber::from_rational(gamma_num_, gamma_den_, p_, precision);
  }

  /// gamma0^k (any integer k) to the given relative precision.
  PAdicNumber gamma_power(long long k, int precision = kDefaultPrecision) const {
    return power(gamma0(precision), k);
  }

  /// Largest r - R over fundamental balls B(c, p^R) in S_r: the depth of the finest structure.
  int max_depth() const {
    int d = 0;
    for (int r = 0; r < j_; ++r)
      for (const auto& wb : fundamental_[static_cast<std::size_t>(r)]) d = std::max(d, r - wb.ball.radius_exp());
    return d;
  }

  Scalar fundamental_mass(int r) const {
    Scalar s(0);
    for (const auto& wb : fundamental_.at(static_cast<std::size_t>(r))) s += wb.weight;
    return s;
  }

  /// Phi is invariant under x -> -x.
  bool is_symmetric() const {
    for (int r = 0; r < j_; ++r) {
      for (const auto& wb : fundamental_[static_cast<std::size_t>(r)]) {
        const Ball neg = wb.ball.negated();
        if (mass_in_fundamental(neg, r) != wb.weight) return false;
      }
    }
    return true;
  }

  /// Phi restricted to each sphere is a multiple of Haar measure.
  bool is_radial() const {
    for (int r = 0; r < j_; ++r) {
      const auto& balls = fundamental_[static_cast<std::size_t>(r)];
      if (balls.empty()) continue;
      const Scalar density = fundamental_mass(r) / (p_power<Scalar>(p_, r) * Scalar(p_ - 1) / Scalar(p_));
      Scalar covered(0);
      for (const auto& wb : balls) {
        if (wb.weight != density * wb.ball.template haar_measure_as<Scalar>()) return false;
        covered += wb.ball.template haar_measure_as<Scalar>();
      }
      if (covered != p_power<Scalar>(p_, r) * Scalar(p_ - 1) / Scalar(p_)) return false;
    }
    return true;
  }

  /// Mass of a ball B(c, p^R) contained in the fundamental sphere S_r.
  Scalar mass_in_fundamental(const Ball& b, int r) const {
    Scalar s(0);
    for (const auto& wb : fundamental_[static_cast<std::size_t>(r)]) {
      if (wb.ball.contains(b)) {
        s += wb.weight * p_power<Scalar>(p_, b.radius_exp() - wb.ball.radius_exp());
      } else if (b.contains(wb.ball)) {
        s += wb.weight;
      }
    }
    return s;
  }

  /// Decomposes a sphere index N = r + k j with r in [0, j).
  std::pair<int, int> reduce_sphere(int n) const {
    int k = n >= 0 ? n / j_ : -((-n + j_ - 1) / j_);
    return {n - k * j_, k};
  }

  Scalar sphere_mass(int n) const {
    auto [r, k] = reduce_sphere(n);
    return int_power<Scalar>(beta_, k) * fundamental_mass(r);
  }

  friend bool operator==(const SelfSimilarLevyMeasure& a, const SelfSimilarLevyMeasure& b) {
    if (a.p_ != b.p_ || a.beta_ != b.beta_ || a.gamma_num_ != b.gamma_num_ || a.gamma_den_ != b.gamma_den_) return false;
    for (std::size_t r = 0; r < a.fundamental_.size(); ++r) {
      const auto &x = a.fundamental_[r], &y = b.fundamental_[r];
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i].ball == y[i].ball) || x[i].weight != y[i].weight) return false;
    }
    return true;
  }

 private:
  int p_;
  Scalar beta_;
  long long gamma_num_, gamma_den_;
  int j_ = 1;
  Fundamental fundamental_;
};

/// Converts exact data to floating point.
inline SelfSimilarLevyMeasure<double> to_double_measure(const SelfSimilarLevyMeasure<Rational>& m) {
  SelfSimilarLevyMeasure<double>::Fundamental f(m.fundamental().size());
  for (std::size_t r = 0; r < f.size(); ++r)
    for (const auto& wb : m.fundamental()[r]) f[r].push_back({wb.ball, to_double(wb.weight)});
  return {m.prime(), to_double(m.beta()), m.gamma_numerator(), m.gamma_denominator(), std::move(f)};
}

/// The measure whose exponent is -a |t|_p^alpha: gamma0 = p, beta = p^-alpha and
/// Haar-proportional mass on the units.
inline SelfSimilarLevyMeasure<double> make_example_measure(double a, double alpha, int p) {
  StableParams{a, alpha, p}.validate();
  const double pa = std::pow(static_cast<double>(p), alpha);
  const double density = a * (pa - 1.0) / (1.0 - 1.0 / (pa * p));
  SelfSimilarLevyMeasure<double>::Fundamental f(1);
  for (const Ball& b : split_sphere(0, 1, p)) f[0].push_back({b, density / p});
  return {p, 1.0 / pa, p, 1, std::move(f)};
}

/// Exact version for integer alpha and rational a.
inline SelfSimilarLevyMeasure<Rational> make_example_measure_exact(const Rational& a, int alpha, int p) {
  require_prime(p);
  if (a <= 0 || alpha <= 0) throw std::invalid_argument("stable law needs a > 0 and alpha > 0");
  const Rational pa = p_power<Rational>(p, alpha);
  const Rational density = a * (pa - 1) / (1 - 1 / (pa * p));
  SelfSimilarLevyMeasure<Rational>::Fundamental f(1);
  for (const Ball& b : split_sphere(0, 1, p)) f[0].push_back({b, density / p});
  return {p, 1 / pa, p, 1, std::move(f)};
}

/// Phi(B) for a ball avoiding 0.
template <class Scalar>
Scalar measure_mass(const SelfSimilarLevyMeasure<Scalar>& m, const Ball& b) {
  if (b.prime() != m.prime()) throw std::invalid_argument("ball and measure use different primes");
  if (b.contains_zero()) throw std::domain_error("Levy measure of a neighbourhood of 0 is infinite: " + b.to_string());
  const int n = b.sphere_index();
  auto [r, k] = m.reduce_sphere(n);
  if (k == 0) return m.mass_in_fundamental(b, r);
  // Phi(B) = beta^k Phi(gamma0^k B)
  const int needed = n - b.radius_exp() + 2;
  const Ball image = b.scaled(m.gamma_power(k, std::max(kDefaultPrecision, needed)));
  return int_power<Scalar>(m.beta(), k) * m.mass_in_fundamental(image, r);
}

template <class Scalar>
Scalar measure_mass(const SelfSimilarLevyMeasure<Scalar>& m, const CompactOpenSet& set) {
  Scalar s(0);
  for (const Ball& b : set.balls()) s += measure_mass(m, b);
  return s;
}

/// Phi(M_{i,inf}) as an exact geometric series.
template <class Scalar>
Scalar measure_mass(const SelfSimilarLevyMeasure<Scalar>& m, TailSet tail) {
  Scalar s(0);
  const int j = m.j();
  for (int r = 0; r < j; ++r) {
    // smallest k with r + k j > i
    const int num = tail.i + 1 - r;
    const int k = num >= 0 ? (num + j - 1) / j : -((-num) / j);
    s += m.fundamental_mass(r) * int_power<Scalar>(m.beta(), k);
  }
  return s / (Scalar(1) - m.beta());
}

/// phi(t) = integral of (chi(t y) - 1) Phi(dy) as an exact character sum.
///
/// Only y with |y| > |t|^-1 contribute; of those, the character integral over
/// the image of a fundamental ball survives only when t is constant on it,
/// which leaves a finite band of spheres and the closed-form tail mass.
template <class Scalar>
CharacterSum<Scalar> levy_exponent_sum(const SelfSimilarLevyMeasure<Scalar>& m, const PAdicNumber& t) {
  const int p = m.prime();
  CharacterSum<Scalar> out(p);
  if (t.is_zero()) {
    if (!t.is_exact_zero())
      throw PrecisionError("Levy exponent at a zero known only mod p^" + std::to_string(t.absolute_precision()));
    return out;
  }
  if (t.prime() != p) throw std::invalid_argument("t and measure use different primes");
  const int v = t.valuation();
  const int depth = m.max_depth();
  for (int n = v + 1; n <= v + depth; ++n) {
    auto [r, k] = m.reduce_sphere(n);
    const auto& balls = m.fundamental()[static_cast<std::size_t>(r)];
    if (balls.empty()) continue;
    const Scalar scale = int_power<Scalar>(m.beta(), k);
    const PAdicNumber g = m.gamma_power(-k, std::max(kDefaultPrecision, depth + 2));
    const PAdicNumber tg = t * g;
    for (const auto& wb : balls) {
      if (wb.ball.radius_exp() + k * m.j() > v) continue;  // character averages to 0 on the image ball
      out.add(character_phase(tg * wb.ball.center()), scale * wb.weight);
    }
  }
  out.add(Phase(p), Scalar(0) - measure_mass(m, TailSet{v}));
  return out;
}

template <class Scalar>
std::complex<double> levy_exponent(const SelfSimilarLevyMeasure<Scalar>& m, const PAdicNumber& t) {
  return levy_exponent_sum(m, t).value();
}

template <class Scalar>
std::complex<double> cf_from_levy(const SelfSimilarLevyMeasure<Scalar>& m, const PAdicNumber& t) {
  return std::exp(levy_exponent(m, t));
}

/// Radial characteristic function of a radial measure; exp(phi) depends only on |t|.
template <class Scalar>
RadialCharFn radial_cf_from_levy(const SelfSimilarLevyMeasure<Scalar>& m) {
  if (!m.is_radial()) throw std::invalid_argument("Levy measure is not radial");
  const int p = m.prime();
  auto shared = std::make_shared<SelfSimilarLevyMeasure<Scalar>>(m);
  auto exponent = [shared, p](int k) {
    // |t| = p^k at t = p^-k
    return levy_exponent(*shared, probe_point(p, k, {1})).real();
  };
  RadialCharFn g;
  g.p = p;
  g.name = "levy";
  g.value = [exponent](int k) { return std::exp(exponent(k)); };
  g.one_minus = [exponent](int k) { return -std::expm1(exponent(k)); };
  g.monotone = true;
  return g;
}

struct ScalingViolation {
  std::string set;
  std::string lhs, rhs;
};

struct ScalingReport {
  int trials = 0;
  std::vector<ScalingViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks Phi(M) = beta Phi(gamma0 M) on random compact open sets in the
/// annulus p^lo < |x| <= p^hi.
template <class Scalar>
ScalingReport validate_scaling(const SelfSimilarLevyMeasure<Scalar>& m, int trials, std::uint64_t seed = 1, int lo = -4,
                               int hi = 4) {
  ScalingReport rep;
  const int p = m.prime();
  const int prec = m.max_depth() + (hi - lo) + 8;
  const PAdicNumber g = m.gamma0(std::max(kDefaultPrecision, prec));
  for (int trial = 0; trial < trials; ++trial) {
    RandomStream rng(seed, static_cast<std::uint64_t>(trial));
    std::vector<Ball> balls;
    const int count = static_cast<int>(rng.uniform_int(4));
    for (int c = 0; c < count; ++c) {
      const int n = lo + 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(hi - lo)));
      const int depth = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m.max_depth() + 2)));
      std::vector<int> digits(static_cast<std::size_t>(depth));
      digits[0] = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p - 1)));
      for (std::size_t d = 1; d < digits.size(); ++d) digits[d] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p)));
      balls.emplace_back(PAdicNumber::from_digits(p, -n, digits), n - depth);
    }
    const CompactOpenSet set = normalize(std::move(balls), p);
    const Scalar lhs = measure_mass(m, set);
    const Scalar rhs = m.beta() * measure_mass(m, scaled(set, g));
    ++rep.trials;
    bool equal;
    if constexpr (std::is_same_v<Scalar, double>) {
      equal = std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(lhs));
    } else {
      equal = lhs == rhs;
    }
    if (!equal) {
      std::ostringstream a, b;
      a << lhs;
      b << rhs;
      rep.violations.push_back({set.to_string(), a.str(), b.str()});
    }
  }
  return rep;
}

/// phi as a black box: exact values plus a bound on sup |phi| over each sphere.
struct ExponentEvaluator {
  int p = 2;
  std::function<CharacterSum<double>(const PAdicNumber&)> phi;
  /// upper bound for |phi(t)| when |t| = p^-v.
  std::function<double(int)> sup_bound;
};

template <class Scalar>
ExponentEvaluator exponent_evaluator(const SelfSimilarLevyMeasure<Scalar>& measure) {
  auto m = std::make_shared<SelfSimilarLevyMeasure<double>>([&] {
    if constexpr (std::is_same_v<Scalar, double>)
      return measure;
    else
      return to_double_measure(measure);
  }());
  return {m->prime(), [m](const PAdicNumber& t) { return levy_exponent_sum(*m, t); },
          [m](int v) { return 2.0 * measure_mass(*m, TailSet{v}); }};
}

inline constexpr int kRefinementCap = 12;

namespace detail {

/// Integral of phi over a t-ball, refining until the p children of a ball
/// all carry the parent's value.
inline double integrate_locally_constant(const ExponentEvaluator& ev, const Ball& b, const CharacterSum<double>& at_center,
                                         int level) {
  const auto kids = b.children();
  std::vector<CharacterSum<double>> values;
  values.reserve(kids.size());
  bool constant = true;
  for (const Ball& c : kids) {
    values.push_back(ev.phi(probe_point(c)));
    if (!(values.back() == at_center)) constant = false;
  }
  if (constant) return to_double(b.haar_measure()) * at_center.value().real();
  if (level >= kRefinementCap)
    throw ToleranceError("exponent not locally constant within " + std::to_string(kRefinementCap) + " refinements on " +
                         b.to_string());
  double s = 0.0;
  for (std::size_t a = 0; a < kids.size(); ++a) s += integrate_locally_constant(ev, kids[a], values[a], level + 1);
  return s;
}

/// p^i times the integral of Re phi over the t-sphere |t| = p^-n.
inline double sphere_integral(const ExponentEvaluator& ev, int n, int i) {
  double s = 0.0;
  for (const Ball& b : split_sphere(-n, 1, ev.p)) s += integrate_locally_constant(ev, b, ev.phi(probe_point(b)), 1);
  return s * int_pow(ev.p, i);
}

}  // namespace detail

struct Recovered {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Phi(M_{i,inf}) = -p^i * integral over |t| <= p^-i of phi(t) dt.
/// `tol` is relative to the a-priori scale sup|phi| / 2 on the sphere |t| = p^-i.
inline Recovered invert_exponent_tail(const ExponentEvaluator& ev, int i, double tol = 1e-14) {
  tol *= 0.5 * ev.sup_bound(i);
  double sum = 0.0;
  for (int n = i;; ++n) {
    sum += detail::sphere_integral(ev, n, i);
    // spheres beyond n contribute at most p^{i-n-1} sup|phi|
    const double bound = int_pow(ev.p, i - n - 1) * ev.sup_bound(n + 1);
    if (bound <= tol) return {-sum, bound};
    if (n - i > 2000) throw ToleranceError("tail of the inversion series did not converge");
  }
}

/// Phi(M_{i,l}) for the annulus p^{i+1} <= |x| <= p^l.
inline Recovered invert_exponent(const ExponentEvaluator& ev, int i, int l, double tol = 1e-14) {
  if (l <= i) throw std::invalid_argument("annulus(i, l) needs l > i");
  // the spheres i <= n < l enter only the inner tail; sum them once
  double inner = 0.0;
  for (int n = i; n < l; ++n) inner += detail::sphere_integral(ev, n, i);
  const Recovered outer = invert_exponent_tail(ev, l, tol);
  // Phi(M_{i,inf}) = -inner + p^{i-l} Phi(M_{l,inf})
  const double factor = 1.0 - int_pow(ev.p, i - l);
  return {-inner - factor * outer.value, factor * outer.error_bound};
}

/// Outcome of the two-valuedness probe.
struct TwoValuedForm {
  enum class Kind { delta, haar_cutoff, not_two_valued };
  Kind kind = Kind::not_two_valued;
  std::optional<PAdicNumber> xi;
  int n = 0;  // cutoff: |g| = 1 exactly on |t| <= p^n

  std::string to_string() const {
    switch (kind) {
      case Kind::delta:
        return "delta xi=" + to_display_string(*xi);
      case Kind::haar_cutoff:
        return "haar_cutoff xi=" + to_display_string(*xi) + " N=" + std::to_string(n);
      default:
        return "not_two_valued";
    }
  }
};

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probes g on t = p^-e u for e in [-depth, radius] and two-digit units u.
/// The verdict is relative to that grid.
inline TwoValuedForm classify_two_valued(const std::function<std::complex<double>(const PAdicNumber&)>& g, int p,
                                         int radius, int depth, double tol = 1e-9) {
  require_prime(p);
  if (radius < -depth) throw std::invalid_argument("classify: empty probe grid");
  auto unit_grid = [p] {
    std::vector<std::vector<int>> us;
    for (int d0 = 1; d0 < p; ++d0)
      for (int d1 = 0; d1 < p; ++d1) us.push_back({d0, d1});
    return us;
  }();
  // modulus levels: all 1, all 0, or mixed
  int cutoff = -depth - 1;
  bool seen_zero = false;
  for (int e = -depth; e <= radius; ++e) {
    bool all_one = true, all_zero = true;
    for (const auto& u : unit_grid) {
      const double a = std::abs(g(probe_point(p, e, u)));
      if (std::abs(a - 1.0) > tol) all_one = false;
      if (a > tol) all_zero = false;
      if (!(std::abs(a - 1.0) <= tol || a <= tol)) return {};
    }
    if (all_one && !seen_zero) {
      cutoff = e;
    } else if (all_zero) {
      seen_zero = true;
    } else {
      return {};
    }
  }
  if (cutoff < -depth) return {};  // |g| vanishes on the whole grid
  // theta_e = phase of g(p^-e); xi_e = p theta_{e+1} - theta_e mod p
  std::vector<double> theta;
  for (int e = -depth; e <= cutoff; ++e) {
    const double arg = std::arg(g(probe_point(p, e, {1}))) / (2.0 * std::numbers::pi);
    theta.push_back(arg - std::floor(arg));
  }
  if (std::min(theta.front(), 1.0 - theta.front()) > tol)
    throw ClassificationError("phases inconsistent with a center of absolute value <= p^" + std::to_string(depth));
  std::vector<int> digits;
  for (std::size_t e = 0; e + 1 < theta.size(); ++e) {
    const double x = p * theta[e + 1] - theta[e];
    const long long d = std::llround(x);
    if (std::abs(x - static_cast<double>(d)) > 1e-6) throw ClassificationError("phases are not those of a character");
    digits.push_back(static_cast<int>(((d % p) + p) % p));
  }
  PAdicNumber xi = digits.empty() ? PAdicNumber::zero(p, cutoff) : PAdicNumber::from_digits(p, -depth, digits);
  // every probe inside the cutoff must equal chi(t xi)
  for (int e = -depth; e <= cutoff; ++e) {
    for (const auto& u : unit_grid) {
      const PAdicNumber t = probe_point(p, e, u);
      const std::complex<double> want = xi.is_zero() ? std::complex<double>(1.0) : character_phase(t * xi).to_complex();
      if (std::abs(g(t) - want) > tol) throw ClassificationError("no center reproduces the probed phases");
    }
  }
  if (xi.is_zero()) xi = PAdicNumber::zero(p);
  TwoValuedForm out;
  out.xi = xi;
  out.n = cutoff;
  out.kind = cutoff == radius ? TwoValuedForm::Kind::delta : TwoValuedForm::Kind::haar_cutoff;
  return out;
}

}  // namespace padic
