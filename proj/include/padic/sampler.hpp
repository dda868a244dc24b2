#pragma once

// Samplers for laws on Q_p.  A sampler at resolution N_min resolves every ball
// of radius >= p^N_min: draws are known modulo p^-N_min.

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "padic/charfn.hpp"
#include "padic/levy.hpp"
#include "padic/random.hpp"

namespace padic {

namespace detail {

/// Uniform point of B(c, p^R) known modulo p^A (A >= -R).
inline PAdicNumber uniform_in_ball(const Ball& b, int absolute_precision, RandomStream& rng) {
  const int p = b.prime();
  const int lo = -b.radius_exp();
  if (absolute_precision <= lo) return b.center().truncated(absolute_precision);
  std::vector<int> digits(static_cast<std::size_t>(absolute_precision - lo));
  for (int& d : digits) d = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p)));
  const PAdicNumber offset = PAdicNumber::from_digits(p, lo, std::move(digits));
  const PAdicNumber base =
      b.center().is_zero() ? PAdicNumber::zero(p, absolute_precision) : b.center().padded(absolute_precision);
  return base + offset;
}

/// Uniform point of the sphere S_N known modulo p^A.
inline PAdicNumber uniform_on_sphere(int n, int p, int absolute_precision, RandomStream& rng) {
  std::vector<int> digits(static_cast<std::size_t>(absolute_precision + n));
  digits[0] = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p - 1)));
  for (std::size_t i = 1; i < digits.size(); ++i) digits[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p)));
  return PAdicNumber::from_digits(p, -n, std::move(digits));
}

/// Index into `cdf` (nondecreasing, last entry = total) for u uniform on [0, 1).
inline std::size_t pick(const std::vector<double>& cdf, double u) {
  const double x = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace detail

struct PointMassSampler {
  PAdicNumber xi;
};

struct HaarBallSampler {
  Ball ball;
};

/// Sphere by inverse CDF on a mass table, then Haar-uniform digits.  Valid for
/// radial laws, whose conditional law on each sphere is Haar.
struct RadialSampler {
  SphereMassTable table;
};

/// Poisson number of jumps from the Levy measure truncated to |y| > p^N_min.
/// Jumps of size <= p^N_min leave every digit below p^-N_min unchanged, so the
/// sum has the exact law at that resolution.
struct CompoundPoissonSampler {
  std::shared_ptr<const SelfSimilarLevyMeasure<double>> measure;
};

class Sampler {
 public:
  using Kind = std::variant<PointMassSampler, HaarBallSampler, RadialSampler, CompoundPoissonSampler>;

  Sampler(Kind kind, int resolution) : kind_(std::move(kind)), resolution_(resolution) { prepare(); }

  static Sampler point_mass(const PAdicNumber& xi, int resolution) { return {PointMassSampler{xi}, resolution}; }
  static Sampler haar(const Ball& b, int resolution) { return {HaarBallSampler{b}, resolution}; }
  static Sampler radial(const RadialCharFn& g, int resolution, int n_lo = -40, int n_hi = 40) {
    return {RadialSampler{sphere_masses(g, n_lo, n_hi)}, resolution};
  }
  static Sampler compound_poisson(const SelfSimilarLevyMeasure<double>& m, int resolution) {
    return {CompoundPoissonSampler{std::make_shared<const SelfSimilarLevyMeasure<double>>(m)}, resolution};
  }

  int prime() const { return prime_; }
  int resolution() const { return resolution_; }
  const Kind& kind() const { return kind_; }
  /// Expected number of jumps per draw (compound Poisson only).
  double jump_rate() const { return lambda_; }

  PAdicNumber draw(RandomStream& rng) const {
    const int abs_prec = -resolution_;
    return std::visit(
        [&](const auto& k) -> PAdicNumber {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, PointMassSampler>) {
            return k.xi.is_exact_zero() ? PAdicNumber::zero(prime_, abs_prec) : k.xi.truncated(abs_prec);
          } else if constexpr (std::is_same_v<T, HaarBallSampler>) {
            return detail::uniform_in_ball(k.ball, abs_prec, rng);
          } else if constexpr (std::is_same_v<T, RadialSampler>) {
            const std::size_t i = detail::pick(cdf_, rng.uniform());
            const int n = k.table.n_lo + static_cast<int>(i) - 1;  // slot 0 gathers 0 and the inner tail
            if (n <= resolution_) return PAdicNumber::zero(prime_, abs_prec);
            return detail::uniform_on_sphere(n, prime_, abs_prec, rng);
          } else {
            return draw_compound(*k.measure, rng);
          }
        },
        kind_);
  }

  std::vector<PAdicNumber> sample(RandomStream& rng, std::size_t count) const {
    std::vector<PAdicNumber> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(draw(rng));
    return out;
  }

 private:
  void prepare() {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, PointMassSampler>) {
            prime_ = k.xi.prime();
            if (k.xi.absolute_precision() < -resolution_) throw PrecisionError("point mass known too coarsely for the resolution");
          } else if constexpr (std::is_same_v<T, HaarBallSampler>) {
            prime_ = k.ball.prime();
          } else if constexpr (std::is_same_v<T, RadialSampler>) {
            prime_ = k.table.p;
            if (k.table.masses.empty()) throw std::invalid_argument("empty sphere mass table");
            // slot 0: atom and inner tail; tails above fold into the top sphere
            double acc = k.table.mass_at_zero + k.table.tail_below;
            cdf_.push_back(acc);
            for (std::size_t i = 0; i < k.table.masses.size(); ++i) {
              acc += k.table.masses[i];
              if (i + 1 == k.table.masses.size()) acc += k.table.tail_above;
              cdf_.push_back(acc);
            }
            if (!(acc > 0.0)) throw std::invalid_argument("sphere mass table has no mass");
          } else {
            prepare_compound(*k.measure);
          }
        },
        kind_);
  }

  void prepare_compound(const SelfSimilarLevyMeasure<double>& m) {
    prime_ = m.prime();
    const int j = m.j();
    lambda_ = measure_mass(m, TailSet{resolution_});
    for (int r = 0; r < j; ++r) {
      const int num = resolution_ + 1 - r;
      const int k = num >= 0 ? (num + j - 1) / j : -((-num) / j);
      first_k_.push_back(k);
      sphere_cdf_.push_back((sphere_cdf_.empty() ? 0.0 : sphere_cdf_.back()) +
                            m.fundamental_mass(r) * int_pow(m.beta(), k));
      std::vector<double> c;
      double acc = 0.0;
      for (const auto& wb : m.fundamental()[static_cast<std::size_t>(r)]) c.push_back(acc += wb.weight);
      ball_cdf_.push_back(std::move(c));
    }
    // gamma0^-k for the jump sizes that occur in practice
    min_k_ = *std::min_element(first_k_.begin(), first_k_.end());
    for (int k = min_k_; k < min_k_ + kCachedPowers; ++k)
      gamma_powers_.push_back(m.gamma_power(-k, std::max(1, j - 1 + k * j - resolution_)));
  }

  PAdicNumber inverse_gamma_power(const SelfSimilarLevyMeasure<double>& m, int k, int precision) const {
    if (k - min_k_ < kCachedPowers) return gamma_powers_[static_cast<std::size_t>(k - min_k_)];
    return m.gamma_power(-k, precision);
  }

  PAdicNumber draw_compound(const SelfSimilarLevyMeasure<double>& m, RandomStream& rng) const {
    const int abs_prec = -resolution_;
    PAdicNumber sum = PAdicNumber::zero(prime_, abs_prec);
    const std::uint64_t jumps = rng.poisson(lambda_);
    const int j = m.j();
    for (std::uint64_t a = 0; a < jumps; ++a) {
      const std::size_t r = detail::pick(sphere_cdf_, rng.uniform());
      const int k = first_k_[r] + static_cast<int>(rng.geometric(m.beta()));
      const auto& balls = m.fundamental()[r];
      const Ball& b = balls[detail::pick(ball_cdf_[r], rng.uniform())].ball;
      // y = gamma0^-k x with x in S_r; |y| = p^{r + k j}
      const int rel = static_cast<int>(r) + k * j - resolution_;
      const PAdicNumber x = detail::uniform_in_ball(b, k * j - resolution_, rng);
      const PAdicNumber y = (x * inverse_gamma_power(m, k, std::max(rel, 1))).truncated(abs_prec);
      sum += y;
    }
    return sum;
  }

  Kind kind_;
  int resolution_;
  int prime_ = 2;
  std::vector<double> cdf_;
  double lambda_ = 0.0;
  std::vector<int> first_k_;
  std::vector<double> sphere_cdf_;
  std::vector<std::vector<double>> ball_cdf_;
  static constexpr int kCachedPowers = 128;
  int min_k_ = 0;
  std::vector<PAdicNumber> gamma_powers_;
};

}  // namespace padic
