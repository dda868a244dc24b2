#pragma once

// Normalized sums S_n = B_n^-1 (X_1 + ... + X_k(n)) of i.i.d. Q_p-valued
// variables: their characteristic functions, Monte Carlo realizations, the
// measures Phi_n(M) = k(n) F(B_n M), and convergence diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "padic/charfn.hpp"
#include "padic/levy.hpp"
#include "padic/sampler.hpp"

namespace padic {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDrawBudget = 1e8;

struct PointLaw {
  PAdicNumber xi;
};
struct HaarLaw {
  Ball ball;
};
struct StableLaw {
  StableParams params;
};
struct LevyLaw {
  std::shared_ptr<const SelfSimilarLevyMeasure<double>> measure;
};

/// A law F on Q_p with computable characteristic function.
class Law {
 public:
  using Kind = std::variant<PointLaw, HaarLaw, StableLaw, LevyLaw>;

  explicit Law(Kind k) : kind_(std::move(k)) {}
  static Law point(const PAdicNumber& xi) { return Law(PointLaw{xi}); }
  static Law haar(const Ball& b) { return Law(HaarLaw{b}); }
  static Law stable(const StableParams& s) {
    s.validate();
    return Law(StableLaw{s});
  }
  static Law levy(const SelfSimilarLevyMeasure<double>& m) {
    return Law(LevyLaw{std::make_shared<const SelfSimilarLevyMeasure<double>>(m)});
  }

  const Kind& kind() const { return kind_; }

  int prime() const {
    return std::visit(
        [](const auto& k) -> int {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, PointLaw>) return k.xi.prime();
          else if constexpr (std::is_same_v<T, HaarLaw>) return k.ball.prime();
          else if constexpr (std::is_same_v<T, StableLaw>) return k.params.p;
          else return k.measure->prime();
        },
        kind_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, PointLaw>) return "delta(" + to_display_string(k.xi) + ")";
          else if constexpr (std::is_same_v<T, HaarLaw>) return "haar" + k.ball.to_string().substr(4);
          else if constexpr (std::is_same_v<T, StableLaw>)
            return "stable(a=" + format_double(k.params.a) + ",alpha=" + format_double(k.params.alpha) +
                   ",p=" + std::to_string(k.params.p) + ")";
          else return "levy(gamma0=" + k.measure->gamma_string() + ",beta=" + format_double(k.measure->beta()) + ")";
        },
        kind_);
  }

  /// The law is given by a Levy exponent (stable or Levy measure).
  bool has_exponent() const { return std::holds_alternative<StableLaw>(kind_) || std::holds_alternative<LevyLaw>(kind_); }

  /// log f(t) where the law is infinitely divisible with a known exponent.
  std::optional<std::complex<double>> log_cf(const PAdicNumber& t) const {
    if (!has_exponent()) return std::nullopt;
    if (t.is_exact_zero()) return std::complex<double>(0.0);
    if (const auto* s = std::get_if<StableLaw>(&kind_))
      return std::complex<double>(-s->params.a * std::pow(static_cast<double>(s->params.p), s->params.alpha * -t.valuation()));
    if (const auto* l = std::get_if<LevyLaw>(&kind_)) return levy_exponent(*l->measure, t);
    return std::nullopt;
  }

  /// f(t)^k, with k applied at the exponent or phase level.
  std::complex<double> cf_power(const PAdicNumber& t, std::uint64_t k) const {
    if (auto e = log_cf(t)) return std::exp(static_cast<double>(k) * *e);
    if (t.is_exact_zero()) return 1.0;
    if (const auto* pt = std::get_if<PointLaw>(&kind_)) {
      if (pt->xi.is_exact_zero()) return 1.0;
      return character_phase(t * pt->xi).times(k).to_complex();
    }
    const auto& h = std::get<HaarLaw>(kind_);
    if (!t.is_zero() && t.valuation() < h.ball.radius_exp()) return 0.0;
    if (h.ball.center().is_zero()) return 1.0;
    return character_phase(t * probe_point(h.ball)).times(k).to_complex();
  }

  std::complex<double> cf(const PAdicNumber& t) const { return cf_power(t, 1); }

  /// Radial form of the characteristic function, when the law is radial.
  std::optional<RadialCharFn> radial() const {
    const int p = prime();
    if (const auto* pt = std::get_if<PointLaw>(&kind_))
      return pt->xi.is_exact_zero() ? std::optional(RadialCharFn::delta_zero(p)) : std::nullopt;
    if (const auto* h = std::get_if<HaarLaw>(&kind_))
      return h->ball.contains_zero() ? std::optional(RadialCharFn::omega(-h->ball.radius_exp(), p)) : std::nullopt;
    if (const auto* s = std::get_if<StableLaw>(&kind_)) return RadialCharFn::stable(s->params);
    const auto& l = std::get<LevyLaw>(kind_);
    if (!l.measure->is_radial()) return std::nullopt;
    return radial_cf_from_levy(*l.measure);
  }

  double ball_probability(const Ball& b) const {
    if (const auto* pt = std::get_if<PointLaw>(&kind_)) return b.contains(pt->xi) ? 1.0 : 0.0;
    if (const auto* h = std::get_if<HaarLaw>(&kind_)) {
      if (b.contains(h->ball)) return 1.0;
      if (h->ball.contains(b)) return int_pow(b.prime(), b.radius_exp() - h->ball.radius_exp());
      return 0.0;
    }
    auto g = radial();
    if (!g) throw std::domain_error("ball probabilities need a radial law: " + describe());
    return padic::ball_probability(*g, b).value;
  }

  /// F(|x| > p^i).
  double tail_probability(int i) const {
    if (const auto* pt = std::get_if<PointLaw>(&kind_)) return !pt->xi.is_zero() && -pt->xi.valuation() > i ? 1.0 : 0.0;
    if (const auto* h = std::get_if<HaarLaw>(&kind_)) {
      if (!h->ball.contains_zero()) return h->ball.sphere_index() > i ? 1.0 : 0.0;
      const int r = h->ball.radius_exp();
      return i >= r ? 0.0 : 1.0 - int_pow(h->ball.prime(), i - r);
    }
    auto g = radial();
    if (!g) throw std::domain_error("tail probabilities need a radial law: " + describe());
    return padic::tail_probability(*g, i).value;
  }

  /// A sampler resolving balls of radius >= p^resolution.
  Sampler sampler(int resolution) const {
    if (const auto* pt = std::get_if<PointLaw>(&kind_)) return Sampler::point_mass(pt->xi, resolution);
    if (const auto* h = std::get_if<HaarLaw>(&kind_)) return Sampler::haar(h->ball, resolution);
    if (const auto* s = std::get_if<StableLaw>(&kind_)) return Sampler::radial(RadialCharFn::stable(s->params), resolution);
    return Sampler::compound_poisson(*std::get<LevyLaw>(kind_).measure, resolution);
  }

  static std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

 private:
  Kind kind_;
};

/// The normalizing data (B_n, k(n)) of the scheme.
class LimitScheme {
 public:
  enum class Mode { geometric, explicit_list };

  /// B_n = gamma0^-n, k(n) = floor(beta^-n).
  static LimitScheme geometric(int p, long long gamma_num, long long gamma_den, double beta, int n_max) {
    require_prime(p);
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("geometric scheme needs 0 < beta <= 1");
    LimitScheme s;
    s.p_ = p;
    s.mode_ = Mode::geometric;
    s.gamma_num_ = gamma_num;
    s.gamma_den_ = gamma_den;
    s.beta_ = beta;
    s.n_max_ = n_max;
    if (gamma_num == 0 || gamma_den == 0) throw std::invalid_argument("gamma0 must be nonzero");
    s.j_ = PAdicNumber::from_rational(gamma_num, gamma_den, p).valuation();
    for (int n = 1; n <= n_max; ++n) s.count(n);  // validates the range of k(n)
    return s;
  }

  /// B_n and k(n) listed for n = 1, ..., n_max; gamma0 and beta (if given)
  /// describe the expected scaling of the limit.
  static LimitScheme explicit_list(int p, std::vector<std::pair<long long, long long>> norms, std::vector<std::uint64_t> counts,
                                   std::optional<std::pair<long long, long long>> gamma0 = std::nullopt,
                                   std::optional<double> beta = std::nullopt) {
    require_prime(p);
    if (norms.size() != counts.size() || norms.empty())
      throw std::invalid_argument("explicit scheme needs equally many B_n and k(n), at least one");
    LimitScheme s;
    s.p_ = p;
    s.mode_ = Mode::explicit_list;
    s.n_max_ = static_cast<int>(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (norms[i].first == 0 || norms[i].second == 0) throw std::invalid_argument("B_n must be nonzero");
      if (counts[i] == 0) throw std::invalid_argument("k(n) must be positive");
      if (i > 0 && counts[i] < counts[i - 1]) throw std::invalid_argument("k(n) must be nondecreasing");
    }
    s.norms_ = std::move(norms);
    s.counts_ = std::move(counts);
    if (gamma0) {
      s.gamma_num_ = gamma0->first;
      s.gamma_den_ = gamma0->second;
      s.j_ = PAdicNumber::from_rational(s.gamma_num_, s.gamma_den_, p).valuation();
    }
    if (beta) s.beta_ = *beta;
    return s;
  }

  int prime() const { return p_; }
  Mode mode() const { return mode_; }
  int n_max() const { return n_max_; }
  double beta() const { return beta_; }
  bool has_gamma() const { return gamma_num_ != 0; }
  long long gamma_numerator() const { return gamma_num_; }
  long long gamma_denominator() const { return gamma_den_; }
  PAdicNumber gamma0(int precision = kDefaultPrecision) const {
    if (!has_gamma()) throw std::logic_error("scheme has no gamma0");
    return PAdicNumber::from_rational(gamma_num_, gamma_den_, p_, precision);
  }

  /// B_n^-1 to the given relative precision (B_0 = 1).
  PAdicNumber inverse_norm(int n, int precision = kDefaultPrecision) const {
    check_n(n);
    if (n == 0) return PAdicNumber::from_integer(1, p_, precision);
    if (mode_ == Mode::geometric) return power(gamma0(precision), n);
    const auto& [a, b] = norms_[static_cast<std::size_t>(n - 1)];
    return PAdicNumber::from_rational(b, a, p_, precision);
  }

  PAdicNumber norm(int n, int precision = kDefaultPrecision) const { return inverse_norm(n, precision).inverse(); }

  /// e with |B_n| = p^e.
  int norm_exponent(int n) const { return inverse_norm(n).valuation(); }

  /// k(n) (k(0) = 1).
  std::uint64_t count(int n) const {
    check_n(n);
    if (n == 0) return 1;
    if (mode_ == Mode::explicit_list) return counts_[static_cast<std::size_t>(n - 1)];
    const double x = std::pow(beta_, -static_cast<double>(n));
    if (!(x < 9.2e18)) throw BudgetError("k(n) = floor(beta^-n) overflows at n = " + std::to_string(n));
    // beta^-n that is an integer up to rounding of pow counts as that integer
    const double r = std::nearbyint(x);
    if (std::abs(x - r) <= 1e-9 * x) return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::floor(x));
  }

  std::string describe() const {
    if (mode_ == Mode::geometric)
      return "geometric(gamma0=" + std::to_string(gamma_num_) + (gamma_den_ == 1 ? "" : "/" + std::to_string(gamma_den_)) +
             ",beta=" + Law::format_double(beta_) + ")";
    return "explicit(n_max=" + std::to_string(n_max_) + ")";
  }

 private:
  void check_n(int n) const {
    if (n < 0 || n > n_max_) throw std::out_of_range("n = " + std::to_string(n) + " outside [0, " + std::to_string(n_max_) + "]");
  }

  int p_ = 2;
  Mode mode_ = Mode::geometric;
  long long gamma_num_ = 0, gamma_den_ = 1;
  int j_ = 0;
  double beta_ = 0.0;
  int n_max_ = 0;
  std::vector<std::pair<long long, long long>> norms_;
  std::vector<std::uint64_t> counts_;
};

/// f_n(t) = f(t / B_n)^k(n).
inline std::complex<double> theoretical_fn(const Law& law, const LimitScheme& scheme, int n, const PAdicNumber& t) {
  if (t.is_exact_zero()) return 1.0;
  const int prec = std::max(kDefaultPrecision, t.precision());
  return law.cf_power(t * scheme.inverse_norm(n, prec), scheme.count(n));
}

/// The law of S_n as a radial characteristic function, when F is radial.
inline std::optional<RadialCharFn> radial_fn(const Law& law, const LimitScheme& scheme, int n) {
  auto base = law.radial();
  if (!base) return std::nullopt;
  const int e = scheme.norm_exponent(n);  // |t / B_n| = |t| p^-e
  const std::uint64_t k = scheme.count(n);
  RadialCharFn g;
  g.p = base->p;
  g.name = base->name + "_n" + std::to_string(n);
  g.monotone = base->monotone;
  g.atom_at_zero = base->atom_at_zero;
  auto exponent = [law](int level) { return law.log_cf(probe_point(law.prime(), level, {1}))->real(); };
  if (law.has_exponent()) {
    g.value = [exponent, e, k](int level) { return std::exp(static_cast<double>(k) * exponent(level - e)); };
    g.one_minus = [exponent, e, k](int level) { return -std::expm1(static_cast<double>(k) * exponent(level - e)); };
  } else {
    g.value = [b = *base, e, k](int level) { return std::pow(b.value(level - e), static_cast<double>(k)); };
  }
  return g;
}

/// Phi_n(B) = k(n) F(B_n B) summed over the balls of a set avoiding 0.
inline double phi_n_measure(const Law& law, const LimitScheme& scheme, int n, const CompactOpenSet& set) {
  double s = 0.0;
  for (const Ball& b : set.balls()) {
    if (b.contains_zero()) throw std::domain_error("Phi_n of a neighbourhood of 0");
    const int prec = std::max(kDefaultPrecision, b.center().precision() + 2);
    s += law.ball_probability(b.scaled(scheme.norm(n, prec)));
  }
  return static_cast<double>(scheme.count(n)) * s;
}

/// Phi_n(M_{i,inf}) = k(n) F(|x| > p^{i + e_n}).
inline double phi_n_measure(const Law& law, const LimitScheme& scheme, int n, TailSet tail) {
  return static_cast<double>(scheme.count(n)) * law.tail_probability(tail.i + scheme.norm_exponent(n));
}

/// Realizations of S_n for replicates [0, m), drawn on `threads` threads.
/// Replicate r uses the stream (seed, n 2^32 + r) whatever the thread count.
inline std::vector<PAdicNumber> simulate_sums(const Sampler& sampler, const LimitScheme& scheme, int n, std::size_t m,
                                              std::uint64_t seed, unsigned threads = 1) {
  const std::uint64_t k = scheme.count(n);
  if (static_cast<double>(k) * static_cast<double>(m) > kDrawBudget)
    throw BudgetError("k(n) * m = " + std::to_string(k) + " * " + std::to_string(m) + " exceeds the draw budget");
  const int p = sampler.prime();
  const int e = scheme.norm_exponent(n);
  const int sum_precision = -sampler.resolution();
  const PAdicNumber scale = scheme.inverse_norm(n, kDefaultPrecision + 16);
  std::vector<PAdicNumber> out(m);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream rng(seed, (static_cast<std::uint64_t>(n) << 32) + r);
      PAdicNumber s = PAdicNumber::zero(p, sum_precision);
      for (std::uint64_t i = 0; i < k; ++i) s += sampler.draw(rng);
      out[r] = s.is_zero() ? PAdicNumber::zero(p, sum_precision + e) : (s * scale).truncated(sum_precision + e);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(m, 1))));
  if (threads == 1) {
    work(0, m);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t b = std::min(m, w * chunk), en = std::min(m, b + chunk);
      pool.emplace_back(work, b, en);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

/// S_n realized at resolution p^resolution from a law (the sampler is built
/// coarser by |B_n| so that the rescaled sum keeps the requested digits).
inline std::vector<PAdicNumber> simulate_sums(const Law& law, const LimitScheme& scheme, int n, std::size_t m,
                                              std::uint64_t seed, int resolution, unsigned threads = 1) {
  return simulate_sums(law.sampler(resolution + scheme.norm_exponent(n)), scheme, n, m, seed, threads);
}

/// | |g(gamma0 t)| - |g(t)|^beta | per grid point.
inline std::vector<double> scaling_identity_check(const std::function<std::complex<double>(const PAdicNumber&)>& g,
                                                  const PAdicNumber& gamma0, double beta, const std::vector<PAdicNumber>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (const PAdicNumber& t : grid) out.push_back(std::abs(std::abs(g(gamma0 * t)) - std::pow(std::abs(g(t)), beta)));
  return out;
}

/// t = u p^-k for k in [k_min, k_max] and units u: |t| = p^k.
struct GridSpec {
  int k_min = -6;
  int k_max = 6;
  std::vector<long long> units{1};

  std::vector<std::pair<std::string, PAdicNumber>> points(int p) const {
    std::vector<std::pair<std::string, PAdicNumber>> out;
    for (int k = k_min; k <= k_max; ++k)
      for (long long u : units) {
        if (u % p == 0) throw std::invalid_argument("grid unit " + std::to_string(u) + " is divisible by p");
        out.emplace_back(std::to_string(u) + "*" + std::to_string(p) + "^" + std::to_string(-k),
                         PAdicNumber::from_integer(u, p, kDefaultPrecision).shifted(-k));
      }
    return out;
  }
};

/// A set on which Phi_n is tracked: a compact open set or a tail M_{i,inf}.
struct PhiSet {
  std::string label;
  std::variant<CompactOpenSet, TailSet> set;
};

struct ClassifySpec {
  int radius = 6;
  int depth = 8;
  std::string expect;  // e.g. "delta xi=0"; empty = report only
};

/// Everything needed to reproduce one convergence experiment.
struct Scenario {
  std::string name;
  Law law = Law::point(PAdicNumber::zero(2));
  LimitScheme scheme = LimitScheme::geometric(2, 2, 1, 0.5, 0);
  std::optional<Law> target;
  GridSpec grid;
  std::vector<Ball> balls;
  std::vector<PhiSet> phi_sets;
  std::size_t m = 0;
  std::vector<int> mc_n;
  int resolution = -8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double cf_tolerance = 1e-12;
  double phi_tolerance = 5e-3;
  bool phi_monotone = true;
  double scale_tolerance = 1e-12;
  bool exact_beyond_scale = false;
  std::optional<bool> expect_positive;
  std::optional<ClassifySpec> classify;
};

struct ReportRow {
  int n = 0;
  std::string point;
  double theoretical = 0.0;
  std::optional<double> empirical;
  double residual = 0.0;
  std::optional<double> band;
};

struct Verdict {
  std::string check;
  bool passed = false;
  std::string detail;
};

struct ConvergenceReport {
  std::string name;
  std::vector<ReportRow> rows;
  std::vector<double> sup_cf_distance;  // index n
  std::vector<Verdict> verdicts;
  std::optional<TwoValuedForm> classification;

  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
  }
};

namespace detail {

inline std::string fmt(double x) { return Law::format_double(x); }

/// Phi(M) for the target law's Levy measure, when it has one.
inline std::optional<SelfSimilarLevyMeasure<double>> target_measure(const std::optional<Law>& target) {
  if (!target) return std::nullopt;
  if (const auto* s = std::get_if<StableLaw>(&target->kind()))
    return make_example_measure(s->params.a, s->params.alpha, s->params.p);
  if (const auto* l = std::get_if<LevyLaw>(&target->kind())) return *l->measure;
  return std::nullopt;
}

}  // namespace detail

inline ConvergenceReport convergence_report(const Scenario& sc) {
  using detail::fmt;
  ConvergenceReport rep;
  rep.name = sc.name;
  const int p = sc.law.prime();
  const auto grid = sc.grid.points(p);
  const int n_max = sc.scheme.n_max();

  // (a) f_n against the limit g on the grid
  if (sc.target) {
    bool exact_ok = true;
    for (int n = 0; n <= n_max; ++n) {
      double sup = 0.0;
      for (std::size_t q = 0; q < grid.size(); ++q) {
        const auto& [label, t] = grid[q];
        const std::complex<double> fn = theoretical_fn(sc.law, sc.scheme, n, t);
        const std::complex<double> g = sc.target->cf(t);
        const double d = std::abs(fn - g);
        sup = std::max(sup, d);
        rep.rows.push_back({n, "cf[t=" + label + "]", g.real(), fn.real(), d, std::nullopt});
        const int k = sc.grid.k_min + static_cast<int>(q / sc.grid.units.size());
        if (sc.exact_beyond_scale && n >= std::max(0, k) && !(fn == g)) exact_ok = false;
      }
      rep.sup_cf_distance.push_back(sup);
    }
    const double last = rep.sup_cf_distance.back();
    rep.verdicts.push_back({"cf_limit", last <= sc.cf_tolerance,
                            "sup_grid |f_n - g| at n=" + std::to_string(n_max) + " is " + fmt(last) + " (tolerance " +
                                fmt(sc.cf_tolerance) + ")"});
    if (sc.exact_beyond_scale)
      rep.verdicts.push_back({"cf_exact_beyond_scale", exact_ok, "f_n(t) = g(t) exactly once p^n >= |t|"});
  }

  // (b) Monte Carlo: empirical cf and ball frequencies of S_n
  if (sc.m > 0) {
    std::size_t inside = 0, total = 0;
    const double band = 4.0 / std::sqrt(static_cast<double>(sc.m));
    for (int n : sc.mc_n) {
      const auto samples = simulate_sums(sc.law, sc.scheme, n, sc.m, sc.seed, sc.resolution, sc.threads);
      for (const auto& [label, t] : grid) {
        if (-t.valuation() > -sc.resolution) continue;  // phase below the simulated resolution
        const std::complex<double> emp = empirical_cf(samples, t);
        const std::complex<double> th = theoretical_fn(sc.law, sc.scheme, n, t);
        const double d = std::abs(emp - th);
        ++total;
        if (d <= band) ++inside;
        rep.rows.push_back({n, "mc_cf[t=" + label + "]", th.real(), emp.real(), d, band});
      }
      const auto fn = radial_fn(sc.law, sc.scheme, n);
      for (const Ball& b : sc.balls) {
        if (b.radius_exp() < sc.resolution) continue;
        double q;
        if (fn) {
          q = ball_probability(*fn, b).value;
        } else if (sc.target) {
          q = sc.target->ball_probability(b);
        } else {
          continue;
        }
        std::size_t hits = 0;
        for (const PAdicNumber& x : samples) hits += b.contains(x) ? 1 : 0;
        const double freq = static_cast<double>(hits) / static_cast<double>(sc.m);
        const double bb = 4.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(sc.m));
        ++total;
        if (std::abs(freq - q) <= bb) ++inside;
        rep.rows.push_back({n, "mc_ball[" + b.to_string() + "]", q, freq, std::abs(freq - q), bb});
      }
    }
    const double frac = total ? static_cast<double>(inside) / static_cast<double>(total) : 1.0;
    rep.verdicts.push_back({"mc_within_bands", frac >= 0.95,
                            std::to_string(inside) + "/" + std::to_string(total) + " points within 4-sigma bands"});
  }

  // ball distances of the exact laws of S_n and G
  if (sc.target && !sc.balls.empty()) {
    const auto gt = sc.target->radial();
    for (int n = 1; n <= n_max; ++n) {
      const auto fn = radial_fn(sc.law, sc.scheme, n);
      if (!fn || !gt) break;
      for (const Ball& b : sc.balls) {
        const double qn = ball_probability(*fn, b).value, q = ball_probability(*gt, b).value;
        rep.rows.push_back({n, "ball[" + b.to_string() + "]", q, qn, std::abs(qn - q), std::nullopt});
      }
    }
  }

  // (c) Phi_n(M) against Phi(M)
  if (auto target = detail::target_measure(sc.target); target && !sc.phi_sets.empty()) {
    bool ok = true;
    std::string detail;
    for (const PhiSet& ps : sc.phi_sets) {
      const double exact = std::visit([&](const auto& s) { return measure_mass(*target, s); }, ps.set);
      double prev = INFINITY, err = 0.0;
      bool monotone = true;
      for (int n = 1; n <= n_max; ++n) {
        const double v = std::visit([&](const auto& s) { return phi_n_measure(sc.law, sc.scheme, n, s); }, ps.set);
        err = std::abs(v - exact);
        if (err > prev) monotone = false;
        prev = err;
        rep.rows.push_back({n, "phi[" + ps.label + "]", exact, v, err, std::nullopt});
      }
      const bool pass = err <= sc.phi_tolerance && (!sc.phi_monotone || monotone);
      ok = ok && pass;
      if (!detail.empty()) detail += "; ";
      detail += ps.label + ": final error " + fmt(err) + (monotone ? ", decreasing" : ", not monotone");
    }
    rep.verdicts.push_back({"phi_n_limit", ok, detail});
  }

  // (d) |g(gamma0 t)| = |g(t)|^beta and (e) g does not vanish
  if (sc.target && sc.scheme.has_gamma() && sc.scheme.beta() > 0.0) {
    std::vector<PAdicNumber> ts;
    for (const auto& pt : grid) ts.push_back(pt.second);
    const Law& g = *sc.target;
    const auto res = scaling_identity_check([&](const PAdicNumber& t) { return g.cf(t); }, sc.scheme.gamma0(), sc.scheme.beta(), ts);
    double worst = 0.0;
    for (std::size_t q = 0; q < res.size(); ++q) {
      worst = std::max(worst, res[q]);
      rep.rows.push_back({0, "scaling[t=" + grid[q].first + "]", 0.0, res[q], res[q], std::nullopt});
    }
    rep.verdicts.push_back({"scaling_identity", worst <= sc.scale_tolerance, "max residual " + fmt(worst)});
  }
  const bool positive_expected =
      sc.expect_positive.value_or(sc.target && (std::holds_alternative<StableLaw>(sc.target->kind()) ||
                                                std::holds_alternative<LevyLaw>(sc.target->kind())));
  if (sc.target && positive_expected) {
    double lo = INFINITY;
    for (const auto& pt : grid) lo = std::min(lo, std::abs(sc.target->cf(pt.second)));
    rep.verdicts.push_back({"cf_nonvanishing", lo > 0.0, "min |g| on grid " + fmt(lo)});
  }

  if (sc.classify) {
    auto fn = [&](const PAdicNumber& t) { return theoretical_fn(sc.law, sc.scheme, n_max, t); };
    TwoValuedForm form;
    std::string text;
    try {
      form = classify_two_valued(fn, p, sc.classify->radius, sc.classify->depth);
      text = form.to_string();
    } catch (const ClassificationError& e) {
      text = std::string("inconsistent: ") + e.what();
    }
    rep.classification = form;
    rep.verdicts.push_back({"classify", sc.classify->expect.empty() || text == sc.classify->expect,
                            text + (sc.classify->expect.empty() ? "" : " (expected " + sc.classify->expect + ")")});
  }
  return rep;
}

}  // namespace padic
