// Compound Poisson draws from the example measure versus exact ball probabilities.
#include <cmath>
#include <cstdio>

#include "padic/sampler.hpp"

int main() {
  using namespace padic;
  const auto g = RadialCharFn::stable({1.0, 1.0, 2});
  const Sampler s = Sampler::compound_poisson(make_example_measure(1.0, 1.0, 2), -4);
  const std::size_t n = 50000;
  std::vector<PAdicNumber> xs;
  for (std::size_t r = 0; r < n; ++r) {
    RandomStream rng(2024, r);
    xs.push_back(s.draw(rng));
  }
  std::printf("jumps per draw %.4f\n%-22s %-10s %-10s %s\n", s.jump_rate(), "ball", "exact", "observed", "z");
  for (const Ball& b : {Ball(PAdicNumber::zero(2), 0), Ball(PAdicNumber::zero(2), -2), Ball(PAdicNumber::from_integer(1, 2), -1),
                        Ball(PAdicNumber::from_rational(1, 2, 2), -1), Ball(PAdicNumber::zero(2), 2)}) {
    std::size_t hits = 0;
    for (const auto& x : xs) hits += b.contains(x);
    const double q = ball_probability(g, b).value, f = double(hits) / n;
    std::printf("%-22s %.6f   %.6f   %+.2f\n", b.to_string().c_str(), q, f, (f - q) / std::sqrt(q * (1 - q) / n));
  }
}
