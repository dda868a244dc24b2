#pragma once

// Radial characteristic functions on Q_p and the ball probabilities they
// determine through Fourier inversion.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/sets.hpp"

namespace padic {

/// Raised when a requested accuracy cannot be certified.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StableParams {
  double a = 1.0;
  double alpha = 1.0;
  int p = 2;

  void validate() const {
    require_prime(p);
    if (!(a > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("stable law needs a > 0 and alpha > 0");
  }
};

/// exp(-a |t|_p^alpha).
inline double stable_cf(const StableParams& params, const PAdicNumber& t) {
  if (t.is_zero()) return 1.0;
  return std::exp(-params.a * std::pow(static_cast<double>(params.p), params.alpha * -t.valuation()));
}

/// A characteristic function depending on t only through |t|_p = p^k.
struct RadialCharFn {
  int p = 2;
  std::string name;
  /// g at |t| = p^k.
  std::function<double(int)> value;
  /// 1 - g at |t| = p^k, evaluated without cancellation where possible.
  std::function<double(int)> one_minus;
  /// lim g as |t| -> infinity, which is the mass of the law at 0.
  double atom_at_zero = 0.0;
  /// g is nonincreasing in |t| (enables sharper tail bounds).
  bool monotone = false;

  double operator()(const PAdicNumber& t) const { return t.is_zero() ? 1.0 : value(-t.valuation()); }
  double complement(int k) const { return one_minus ? one_minus(k) : 1.0 - value(k); }

  static RadialCharFn stable(const StableParams& s) {
    s.validate();
    RadialCharFn g;
    g.p = s.p;
    g.name = "stable(a=" + std::to_string(s.a) + ",alpha=" + std::to_string(s.alpha) + ")";
    g.value = [s](int k) { return std::exp(-s.a * std::pow(static_cast<double>(s.p), s.alpha * k)); };
    g.one_minus = [s](int k) { return -std::expm1(-s.a * std::pow(static_cast<double>(s.p), s.alpha * k)); };
    g.monotone = true;
    return g;
  }

  /// Omega_N: 1 on |t| <= p^N, 0 elsewhere (the law of Haar measure on B(0, p^{-N})).
  static RadialCharFn omega(int n, int p) {
    require_prime(p);
    RadialCharFn g;
    g.p = p;
    g.name = "omega" + std::to_string(n);
    g.value = [n](int k) { return k <= n ? 1.0 : 0.0; };
    g.monotone = true;
    return g;
  }

  /// g = 1: the point mass at 0.
  static RadialCharFn delta_zero(int p) {
    require_prime(p);
    RadialCharFn g;
    g.p = p;
    g.name = "delta0";
    g.value = [](int) { return 1.0; };
    g.atom_at_zero = 1.0;
    g.monotone = true;
    return g;
  }
};

/// A probability with a certified bound on its truncation error.
struct CertifiedValue {
  double value = 0.0;
  double error_bound = 0.0;
};

namespace detail {

inline constexpr int kMaxSeriesTerms = 20000;

/// sum_{k <= top} (1 - 1/p) p^k (1 - g_k), truncated once the remainder is
/// certified below `tol`; the remainder is scaled by `scale` for the check.
inline CertifiedValue complement_series(const RadialCharFn& g, int top, double scale, double tol) {
  const double p = g.p;
  const double w = 1.0 - 1.0 / p;
  double sum = 0.0;
  // terms are accumulated from the top down, then re-summed smallest first
  std::vector<double> terms;
  for (int k = top, n = 0;; --k, ++n) {
    if (n >= kMaxSeriesTerms)
      throw ToleranceError("ball probability: tolerance " + std::to_string(tol) + " not reached for " + g.name);
    const double c = g.complement(k);
    terms.push_back(w * int_pow(p, k) * c);
    // remainder over k' < k is at most p^{k-1} * sup_{k' < k} |1 - g_{k'}|
    const double sup = g.monotone ? std::abs(c) : 2.0;
    const double bound = scale * int_pow(p, k - 1) * sup;
    if (bound <= tol && n >= 2) {
      for (auto it = terms.rbegin(); it != terms.rend(); ++it) sum += *it;
      return {sum, bound};
    }
  }
}

}  // namespace detail

/// mu(|x| > p^i) = p^i sum_{k <= -i} (1 - 1/p) p^k (1 - g(p^k)).
inline CertifiedValue tail_probability(const RadialCharFn& g, int i, double tol = 1e-14) {
  const double scale = int_pow(g.p, i);
  auto s = detail::complement_series(g, -i, scale, tol);
  return {scale * s.value, s.error_bound};
}

/// mu(B) for the law with radial characteristic function g.
///
/// Fourier inversion gives mu(B(c, p^N)) = p^N * integral over |y| <= p^{-N} of
/// g(y) chi(-c y) dy; for radial g the integral over each sphere is explicit.
inline CertifiedValue ball_probability(const RadialCharFn& g, const Ball& b, double tol = 1e-14) {
  if (b.prime() != g.p) throw std::invalid_argument("ball and characteristic function use different primes");
  const int n = b.radius_exp();
  if (b.contains_zero()) {
    auto t = tail_probability(g, n, tol);
    return {1.0 - t.value, t.error_bound};
  }
  // |c| = p^e > p^N:  mu = p^N [ p^{-e} (1 - g_{-e+1}) - sum_{k <= -e} (1-1/p) p^k (1 - g_k) ]
  const int e = b.sphere_index();
  const double scale = int_pow(g.p, n);
  auto s = detail::complement_series(g, -e, scale, tol);
  const double value = scale * (int_pow(g.p, -e) * g.complement(-e + 1) - s.value);
  return {value, s.error_bound};
}

/// Probability masses of the spheres S_N, N in [n_lo, n_hi].
struct SphereMassTable {
  int p = 2;
  int n_lo = 0;
  int n_hi = 0;
  std::vector<double> masses;  // masses[N - n_lo] = mu(S_N)
  double mass_at_zero = 0.0;
  double tail_below = 0.0;  // mu(0 < |x| < p^n_lo)
  double tail_above = 0.0;  // mu(|x| > p^n_hi)
  double error_bound = 0.0;
  int clamped = 0;  // negative masses (within tolerance) set to 0

  double mass(int n) const { return masses.at(static_cast<std::size_t>(n - n_lo)); }
  double total() const {
    double s = mass_at_zero + tail_below + tail_above;
    for (double m : masses) s += m;
    return s;
  }
};

inline SphereMassTable sphere_masses(const RadialCharFn& g, int n_lo = -40, int n_hi = 40, double tol = 1e-14) {
  if (n_lo > n_hi) throw std::invalid_argument("sphere_masses: n_lo > n_hi");
  SphereMassTable t;
  t.p = g.p;
  t.n_lo = n_lo;
  t.n_hi = n_hi;
  t.mass_at_zero = g.atom_at_zero;
  std::vector<double> tails;  // tails[i] = mu(|x| > p^{n_lo - 1 + i})
  for (int n = n_lo - 1; n <= n_hi; ++n) {
    auto c = tail_probability(g, n, tol);
    tails.push_back(c.value);
    t.error_bound = std::max(t.error_bound, c.error_bound);
  }
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::size_t i = static_cast<std::size_t>(n - n_lo);
    double m = tails[i] - tails[i + 1];
    if (m < 0.0) {
      if (m < -4.0 * tol) throw ToleranceError("negative sphere mass " + std::to_string(m) + " at N=" + std::to_string(n));
      m = 0.0;
      ++t.clamped;
    }
    t.masses.push_back(m);
  }
  t.tail_above = tails.back();
  t.tail_below = std::max(0.0, 1.0 - tails.front() - t.mass_at_zero);
  return t;
}

/// (1/n) sum exp(2 pi i {t x_i}_p).
inline std::complex<double> empirical_cf(std::span<const PAdicNumber> samples, const PAdicNumber& t) {
  if (samples.empty()) throw std::invalid_argument("empirical_cf of no samples");
  if (t.is_zero()) return 1.0;
  // tally phases exactly, then materialize once per distinct phase
  CharacterSum<long long> tally(t.prime());
  for (const PAdicNumber& x : samples) {
    if (x.prime() != t.prime()) throw std::invalid_argument("samples of mixed primes");
    PAdicNumber tx = x.is_exact_zero() ? x : t * x;
    Phase ph;
    try {
      ph = character_phase(tx);
    } catch (const PrecisionError&) {
      throw PrecisionError("sample resolution too coarse for |t| = p^" + std::to_string(-t.valuation()));
    }
    tally.add(ph, 1);
  }
  return tally.value() / static_cast<double>(samples.size());
}

}  // namespace padic
