#pragma once

// The acceptance criteria, runnable from the test binary and from
// `padic selftest`.  Results carry no timings so reports are reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "padic/report.hpp"

namespace padic::acceptance {

struct Options {
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  /// Negative control: every tolerance becomes unattainable.
  bool corrupt_tolerance = false;

  double tol(double t) const { return corrupt_tolerance ? -1.0 : t; }
};

struct Result {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  std::vector<std::string> tags;
  double time_limit_s;
  std::function<Result(const Options&)> run;
};

inline std::string fmt(double x, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// Random p-adic number with absolute precision >= 0 (so its phase is defined).
inline PAdicNumber random_padic(RandomStream& rng, int p, int v_lo = -6, int v_hi = 6, int max_digits = 12) {
  if (rng.uniform_int(20) == 0) return PAdicNumber::zero(p);
  const int v = v_lo + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(v_hi - v_lo + 1)));
  const int min_k = std::max(1, -v);
  const int k = min_k + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(std::max(1, max_digits - min_k + 1))));
  std::vector<int> d(static_cast<std::size_t>(k));
  d[0] = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p - 1)));
  for (std::size_t i = 1; i < d.size(); ++i) d[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p)));
  return PAdicNumber::from_digits(p, v, d);
}

/// Random self-similar measure with exact rational data.
inline SelfSimilarLevyMeasure<Rational> random_measure(RandomStream& rng) {
  static constexpr int primes[] = {2, 3, 5};
  const int p = primes[rng.uniform_int(3)];
  const int j = 1 + static_cast<int>(rng.uniform_int(2));
  long long pj = 1;
  for (int i = 0; i < j; ++i) pj *= p;
  const std::pair<long long, long long> units[] = {{1, 1}, {-1, 1}, {1 + p, 1}, {1, 1 + p}, {2 * p - 1, 1}};
  const auto u = units[rng.uniform_int(5)];
  const Rational betas[] = {Rational(1, 2), Rational(1, 3), Rational(2, 5), Rational(3, 4), Rational(1, 5)};
  const Rational beta = betas[rng.uniform_int(5)];
  SelfSimilarLevyMeasure<Rational>::Fundamental f(static_cast<std::size_t>(j));
  for (int r = 0; r < j; ++r) {
    const int depth = 1 + static_cast<int>(rng.uniform_int(p == 2 ? 3 : 2));
    for (const Ball& b : split_sphere(r, depth, p))
      if (rng.uniform_int(4) != 0) f[static_cast<std::size_t>(r)].push_back({b, Rational(1 + static_cast<long long>(rng.uniform_int(9)), 7)});
  }
  if (f[0].empty()) f[0].push_back({split_sphere(0, 1, p).front(), Rational(1)});
  return {p, beta, pj * u.first, u.second, std::move(f)};
}

inline std::vector<PAdicNumber> grid_points(int p, int k_min = -6, int k_max = 6, std::vector<long long> units = {1}) {
  GridSpec g{k_min, k_max, std::move(units)};
  std::vector<PAdicNumber> out;
  for (auto& [label, t] : g.points(p)) out.push_back(t);
  return out;
}

// 1. arithmetic and character identities on random inputs
inline Result character_exactness(const Options& o) {
  RandomStream rng(o.seed, 1);
  static constexpr int primes[] = {2, 3, 5, 7};
  long failures = 0, checks = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int p = primes[rng.uniform_int(4)];
    const PAdicNumber x = random_padic(rng, p), y = random_padic(rng, p);
    const PAdicNumber s = x + y;
    const AbsoluteValue ax = x.abs(), ay = y.abs(), as = s.abs();
    ++checks;
    if (as > std::max(ax, ay) || (ax != ay && !s.is_zero() && as != std::max(ax, ay))) ++failures;
    ++checks;
    if ((x * y).abs() != ax * ay) ++failures;
    ++checks;
    if (character_phase(s) != character_phase(x) + character_phase(y)) ++failures;
    const PAdicNumber z = random_padic(rng, p, 0, 6);
    ++checks;
    if (character_phase(x + z) != character_phase(x)) ++failures;
  }
  return {"1", "", failures <= o.tol(0), std::to_string(failures) + " failures in " + std::to_string(checks) + " checks"};
}

// 2. character integrals against summation over residue classes
inline Result fourier_oracle(const Options& o) {
  RandomStream rng(o.seed, 2);
  double worst = 0.0;
  int pairs = 0;
  while (pairs < 1000) {
    const int p = rng.uniform_int(2) ? 3 : 2;
    // t = A p^-e, c = C p^-f, ball radius p^N; A, C < p^6
    auto ipow = [p](int e) {
      long long r = 1;
      for (int i = 0; i < e; ++i) r *= p;
      return r;
    };
    const long long A = 1 + static_cast<long long>(rng.uniform_int(static_cast<std::uint64_t>(ipow(6) - 1)));
    const long long C = static_cast<long long>(rng.uniform_int(static_cast<std::uint64_t>(ipow(6))));
    const int e = static_cast<int>(rng.uniform_int(7)) - 3;
    const int f = static_cast<int>(rng.uniform_int(7)) - 3;
    const int n = static_cast<int>(rng.uniform_int(7)) - 3;
    const int levels = std::max(0, n + e);  // chi(t y) is constant on balls of radius p^{n - levels}
    if (levels > 6) continue;
    ++pairs;
    // every quantity as X / p^M with M large enough
    const int M = 3 + 3 + 3 + 6 + 3;
    const __int128 mod = ipow(M);
    auto scaled = [&](long long value, int shift) {  // value p^-shift as numerator over p^M
      return static_cast<__int128>(value) * ipow(M - shift);
    };
    const __int128 t_over = scaled(A, e);  // t p^M
    std::complex<long double> sum = 0.0L;
    const long long count = ipow(levels);
    for (long long a = 0; a < count; ++a) {
      // y = C p^-f + a p^-n; t y = A (C p^-f + a p^-n) p^-e
      const __int128 y_num = scaled(C, f) + scaled(a, n);  // y p^M
      // {t y} = ((t y p^{2M}) mod p^{2M}) / p^{2M}
      const __int128 full = mod * mod;
      const long double turns = static_cast<long double>((t_over * y_num) % full) / static_cast<long double>(full);
      const long double ang = 2.0L * std::numbers::pi_v<long double> * turns;
      sum += std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    const long double scale = std::pow(static_cast<long double>(p), n - levels);
    const std::complex<double> oracle(static_cast<double>(sum.real() * scale), static_cast<double>(sum.imag() * scale));
    const PAdicNumber t = PAdicNumber::from_rational(A, 1, p).shifted(-e);
    const PAdicNumber c = C == 0 ? PAdicNumber::zero(p) : PAdicNumber::from_rational(C, 1, p).shifted(-f);
    const std::complex<double> got = integrate_char(normalize({Ball(c, n)}, p), t);
    worst = std::max(worst, std::abs(got - oracle));
  }
  return {"2", "", worst <= o.tol(1e-12), "max |error| " + fmt(worst) + " over " + std::to_string(pairs) + " pairs"};
}

// 3. the example measure reproduces exp(-a |t|^alpha)
inline Result closed_form(const Options& o) {
  double worst = 0.0;
  for (int p : {2, 3, 5})
    for (double a : {0.5, 1.0, 2.0})
      for (double alpha : {0.5, 1.0, 2.0}) {
        const auto m = make_example_measure(a, alpha, p);
        for (const PAdicNumber& t : grid_points(p))
          worst = std::max(worst, std::abs(cf_from_levy(m, t) - stable_cf({a, alpha, p}, t)));
      }
  return {"3", "", worst <= o.tol(1e-12), "max |error| " + fmt(worst) + " over 27 laws x 13 points"};
}

// 4. phi(gamma0 t) = beta phi(t) and exact mass scaling
inline Result scaling_law(const Options& o) {
  RandomStream rng(o.seed, 4);
  double worst = 0.0;
  int exact_failures = 0, mass_failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto exact = random_measure(rng);
    const auto m = to_double_measure(exact);
    const int p = m.prime();
    const PAdicNumber g = m.gamma0();
    for (const PAdicNumber& t : grid_points(p, -6, 6, {1, p + 1})) {
      const std::complex<double> scaled = m.beta() * levy_exponent(m, t);
      worst = std::max(worst, std::abs(levy_exponent(m, g * t) - scaled) / std::max(1.0, std::abs(scaled)));
      if (!(levy_exponent_sum(exact, g * t) == exact.beta() * levy_exponent_sum(exact, t))) ++exact_failures;
    }
    mass_failures += static_cast<int>(validate_scaling(exact, 20, o.seed + static_cast<std::uint64_t>(trial)).violations.size());
  }
  const bool ok = worst <= o.tol(1e-14) && exact_failures <= o.tol(0) && mass_failures <= o.tol(0);
  return {"4", "", ok,
          "max scaled residual " + fmt(worst) + "; exact exponent mismatches " + std::to_string(exact_failures) +
              "; mass identity violations " + std::to_string(mass_failures)};
}

// 5. inversion of the exponent recovers annulus masses
inline Result inversion_round_trip(const Options& o) {
  RandomStream rng(o.seed, 5);
  double worst = 0.0;
  int annuli = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto exact = random_measure(rng);
    const auto ev = exponent_evaluator(exact);
    for (int q = 0; q < 4; ++q, ++annuli) {
      const int i = static_cast<int>(rng.uniform_int(6)) - 3;
      const int l = i + 1 + static_cast<int>(rng.uniform_int(3));
      const double want = to_double(measure_mass(exact, annulus(i, l, exact.prime())));
      const double got = invert_exponent(ev, i, l).value;
      worst = std::max(worst, std::abs(got - want) / want);
    }
  }
  return {"5", "", worst <= o.tol(1e-10), "max relative error " + fmt(worst) + " over " + std::to_string(annuli) + " annuli"};
}

inline std::vector<double> stable_sup_errors(int p, double a, double alpha, int n_max) {
  const Law law = Law::stable({a, alpha, p});
  const auto scheme = LimitScheme::geometric(p, p, 1, std::pow(static_cast<double>(p), -alpha), n_max);
  const auto grid = grid_points(p);
  std::vector<double> sup;
  for (int n = 0; n <= n_max; ++n) {
    double s = 0.0;
    for (const PAdicNumber& t : grid) s = std::max(s, std::abs(theoretical_fn(law, scheme, n, t) - law.cf(t)));
    sup.push_back(s);
  }
  return sup;
}

// 6a. f_n = g when beta^-1 is an integer
inline Result exact_regime(const Options& o) {
  double worst = 0.0;
  for (auto [p, alpha] : {std::pair{2, 1.0}, {2, 2.0}, {3, 1.0}, {5, 1.0}})
    for (double a : {0.5, 1.0, 2.0})
      for (double e : stable_sup_errors(p, a, alpha, 10)) worst = std::max(worst, e);
  return {"6a", "", worst <= o.tol(1e-14), "max sup_grid |f_n - g| for n <= 10: " + fmt(worst)};
}

// 6b. per-step decay ratio at alpha = 0.7
inline Result decay_ratio(const Options& o) {
  const double beta = std::pow(2.0, -0.7);
  const auto sup = stable_sup_errors(2, 1.0, 0.7, 10);
  bool ok = true;
  std::string detail = "ratios n=4..9:";
  for (int n = 4; n < 10; ++n) {
    const double r = sup[static_cast<std::size_t>(n + 1)] / sup[static_cast<std::size_t>(n)];
    const bool in = o.tol(1.0) > 0 && r >= beta / 2 && r <= 2 * beta;
    ok = ok && in;
    detail += " " + fmt(r);
  }
  detail += " (band [" + fmt(beta / 2) + ", " + fmt(2 * beta) + "])";
  return {"6b", "", ok, detail};
}

inline std::vector<Ball> sampler_balls() {
  std::vector<Ball> out;
  for (auto [c, r] : std::initializer_list<std::pair<const char*, int>>{{"0", 0},   {"0", -1},  {"0", -2}, {"0", -3},
                                                                         {"1", -1},  {"1", -3},  {"3", -2}, {"1/2", -1},
                                                                         {"0", 1},   {"1/4", -3}})
    out.emplace_back(parse_padic(c, 2), r);
  return out;
}

/// Empirical frequencies of the sampler balls for the example measure.
inline std::vector<std::size_t> sampler_counts(std::size_t m, std::uint64_t seed, unsigned threads, int resolution) {
  const Sampler s = Sampler::compound_poisson(make_example_measure(1.0, 1.0, 2), resolution);
  const auto balls = sampler_balls();
  std::vector<std::vector<std::size_t>> per(std::max(1u, threads), std::vector<std::size_t>(balls.size()));
  auto work = [&](unsigned w, std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) {
      RandomStream rng(seed, r);
      const PAdicNumber x = s.draw(rng);
      for (std::size_t q = 0; q < balls.size(); ++q) per[w][q] += balls[q].contains(x) ? 1 : 0;
    }
  };
  const unsigned nt = std::max(1u, threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (m + nt - 1) / nt;
  for (unsigned w = 0; w < nt; ++w) pool.emplace_back(work, w, std::min(m, w * chunk), std::min(m, (w + 1) * chunk));
  for (auto& th : pool) th.join();
  std::vector<std::size_t> total(balls.size());
  for (const auto& v : per)
    for (std::size_t q = 0; q < v.size(); ++q) total[q] += v[q];
  return total;
}

// 7. compound Poisson sampler against ball probabilities
inline Result sampler_fidelity(const Options& o) {
  const std::size_t m = 100000;
  const auto balls = sampler_balls();
  const auto counts = sampler_counts(m, o.seed, o.threads, -3);
  const RadialCharFn g = RadialCharFn::stable({1.0, 1.0, 2});
  // reference for Z_2 from the plain series sum_{j=-60}^{0} 2^{j-1} exp(-2^j)
  double series = 0.0;
  for (int j = -60; j <= 0; ++j) series += std::ldexp(std::exp(-std::ldexp(1.0, j)), j - 1);
  const double z2 = ball_probability(g, balls[0]).value;
  bool ok = std::abs(z2 - series) <= o.tol(1e-10);
  int outside = 0;
  double worst_z = 0.0;
  for (std::size_t q = 0; q < balls.size(); ++q) {
    const double p = ball_probability(g, balls[q]).value;
    const double freq = static_cast<double>(counts[q]) / static_cast<double>(m);
    const double band = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(m));
    if (std::abs(freq - p) > o.tol(1.0) * band && !(band == 0.0 && freq == p && !o.corrupt_tolerance)) ++outside;
    if (band > 0) worst_z = std::max(worst_z, std::abs(freq - p) / (band / 4.0));
  }
  ok = ok && outside == 0;
  return {"7", "", ok,
          "mu(Z_2) = " + fmt(z2, 12) + " (series " + fmt(series, 12) + "); " + std::to_string(outside) +
              "/10 balls outside 4-sigma, max |z| " + fmt(worst_z)};
}

// 8. Phi_n(M_{0,inf}) -> 2/3 for the stable law
inline Result phi_trajectory(const Options& o) {
  const Law law = Law::stable({1.0, 1.0, 2});
  const auto scheme = LimitScheme::geometric(2, 2, 1, 0.5, 8);
  const double exact = to_double(measure_mass(make_example_measure_exact(1, 1, 2), TailSet{0}));
  double prev = INFINITY, err = 0.0;
  bool decreasing = true;
  std::string detail = "errors:";
  for (int n = 1; n <= 8; ++n) {
    err = std::abs(phi_n_measure(law, scheme, n, TailSet{0}) - exact);
    if (!(err < prev)) decreasing = false;
    prev = err;
    detail += " " + fmt(err);
  }
  return {"8", "", decreasing && err <= o.tol(5e-3), detail};
}

// 9. degenerate limits
inline Result degenerate_cases(const Options& o) {
  const int p = 2, n_max = 8;
  const Law haar = Law::haar(Ball(PAdicNumber::zero(p), 0));
  const GridSpec grid{-6, 6, {1, 3}};
  std::vector<std::pair<long long, long long>> shrinking_norms, unit;
  std::vector<std::uint64_t> counts;
  for (int n = 1; n <= n_max; ++n) {
    shrinking_norms.emplace_back(1, 1LL << n);
    unit.emplace_back(1, 1);
    counts.push_back(static_cast<std::uint64_t>(n));
  }
  const auto shrinking = LimitScheme::explicit_list(p, shrinking_norms, counts);
  const auto unit_scale = LimitScheme::explicit_list(p, unit, counts);
  int mismatches = 0;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& [label, t] : grid.points(p)) {
      const int k = -t.valuation();
      if (n >= k && theoretical_fn(haar, shrinking, n, t) != std::complex<double>(1.0)) ++mismatches;
      if (theoretical_fn(haar, unit_scale, n, t) != haar.cf(t)) ++mismatches;
    }
  auto verdict = [&](const LimitScheme& s) {
    try {
      return classify_two_valued([&](const PAdicNumber& t) { return theoretical_fn(haar, s, n_max, t); }, p, 6, 8).to_string();
    } catch (const ClassificationError& e) {
      return std::string("inconsistent");
    }
  };
  const std::string delta_verdict = verdict(shrinking), haar_verdict = verdict(unit_scale);
  const bool ok = mismatches <= o.tol(0) && delta_verdict == "delta xi=0" && haar_verdict == "haar_cutoff xi=0 N=0";
  return {"9", "", ok, "exact mismatches " + std::to_string(mismatches) + "; beta=1: " + delta_verdict + "; B_n=1: " + haar_verdict};
}

// 10. parallel and serial runs agree byte for byte
inline Result determinism(const Options& o) {
  const unsigned many = std::max(4u, o.threads);
  const auto serial = sampler_counts(20000, o.seed, 1, -3);
  const auto parallel = sampler_counts(20000, o.seed, many, -3);
  Scenario sc;
  sc.name = "determinism";
  sc.law = Law::stable({1.0, 1.0, 2});
  sc.scheme = LimitScheme::geometric(2, 2, 1, 0.5, 3);
  sc.target = Law::stable({1.0, 1.0, 2});
  sc.m = 2000;
  sc.mc_n = {1, 3};
  sc.resolution = -4;
  sc.seed = o.seed;
  sc.balls = {Ball(PAdicNumber::zero(2), 0), Ball(PAdicNumber::from_integer(1, 2), -1)};
  sc.threads = 1;
  const std::string a = report_csv(convergence_report(sc), Json::object(), o.seed);
  sc.threads = many;
  const std::string b = report_csv(convergence_report(sc), Json::object(), o.seed);
  const bool ok = serial == parallel && a == b && !o.corrupt_tolerance;
  return {"10", "", ok,
          std::string("sampler counts ") + (serial == parallel ? "identical" : "differ") + "; report bytes " +
              (a == b ? "identical" : "differ") + " (1 vs " + std::to_string(many) + " threads)"};
}

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"1", "character and arithmetic exactness", {"padic-core"}, 5, character_exactness},
      {"2", "Fourier integrals vs residue sums", {"sets-haar"}, 10, fourier_oracle},
      {"3", "example measure closed form", {"levy"}, 5, closed_form},
      {"4", "exponent scaling law", {"levy"}, 10, scaling_law},
      {"5", "exponent inversion round trip", {"levy"}, 60, inversion_round_trip},
      {"6a", "f_n = g for integer 1/beta", {"limits"}, 30, exact_regime},
      {"6b", "decay ratio at alpha = 0.7", {"limits"}, 30, decay_ratio},
      {"7", "compound Poisson sampler fidelity", {"charfn-dist", "sampler"}, 120, sampler_fidelity},
      {"8", "Phi_n trajectory", {"limits"}, 60, phi_trajectory},
      {"9", "degenerate limits", {"limits", "levy"}, 10, degenerate_cases},
      {"10", "determinism under parallelism", {"cli"}, 120, determinism},
  };
  return all;
}

inline bool matches(const Criterion& c, const std::string& filter) {
  if (filter.empty() || filter == c.id) return true;
  return std::find(c.tags.begin(), c.tags.end(), filter) != c.tags.end();
}

inline Result run(const Criterion& c, const Options& o) {
  Result r;
  try {
    r = c.run(o);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = c.id;
  r.name = c.name;
  return r;
}

inline Json to_json(const std::vector<Result>& results, const Options& o) {
  Json list = Json::array();
  bool all = true;
  for (const Result& r : results) {
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  return {{"tool", "padic"},
          {"version", kVersion},
          {"seed", o.seed},
          {"config", {{"corrupt_tolerance", o.corrupt_tolerance}}},
          {"criteria", list},
          {"passed", all}};
}

}  // namespace padic::acceptance
