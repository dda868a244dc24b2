#pragma once

// Counter-based random streams.  A stream is addressed by (seed, replicate);
// draw i of replicate r depends on nothing else, so replicates can be run on
// any number of threads and still reproduce bit for bit.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace padic {

/// Philox4x32 with 10 rounds (Salmon et al.), used as a keyed block function.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t replicate)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, replicate_(replicate) {}

  std::uint64_t replicate() const { return replicate_; }

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return block_[used_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform on {0, ..., n-1}, unbiased (Lemire's multiply-and-reject).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int(0)");
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Number of failures before the first success, P(K = k) = (1 - q) q^k.
  std::uint64_t geometric(double q) {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("geometric ratio must lie in [0, 1)");
    if (q == 0.0) return 0;
    return static_cast<std::uint64_t>(std::floor(std::log(uniform_pos()) / std::log(q)));
  }

  /// Poisson(mean): sequential inversion for mean <= 30, PTRS rejection above.
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean <= 30.0) return poisson_inversion(mean);
    return poisson_ptrs(mean);
  }

 private:
  void refill() {
    block_ = philox4x32({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                         static_cast<std::uint32_t>(replicate_), static_cast<std::uint32_t>(replicate_ >> 32)},
                        key_);
    ++counter_;
    used_ = 0;
  }

  std::uint64_t poisson_inversion(double mean) {
    const double u = uniform();
    double prob = std::exp(-mean), cdf = prob;
    std::uint64_t k = 0;
    while (u >= cdf) {
      ++k;
      prob *= mean / static_cast<double>(k);
      cdf += prob;
      if (prob == 0.0 && cdf <= u) break;  // rounding left a sliver of mass
    }
    return k;
  }

  // Hormann (1993), transformed rejection with squeeze.
  std::uint64_t poisson_ptrs(double mean) {
    const double slam = std::sqrt(mean), loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::fabs(u);
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -mean + k * loglam - std::lgamma(k + 1.0))
        return static_cast<std::uint64_t>(k);
    }
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t replicate_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

}  // namespace padic
