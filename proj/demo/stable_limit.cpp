// Normalized sums of G(1, alpha) on Q_2 under B_n = 2^-n, k(n) = floor(2^{alpha n}).
// Prints sup |f_n - g| over the grid: zero for alpha = 1, slow decay for alpha = 0.7.
#include <cmath>
#include <cstdio>

#include "padic/limits.hpp"

int main() {
  using namespace padic;
  const GridSpec grid;
  for (double alpha : {1.0, 0.7}) {
    const Law g = Law::stable({1.0, alpha, 2});
    const auto scheme = LimitScheme::geometric(2, 2, 1, std::pow(2.0, -alpha), 10);
    std::printf("alpha = %g\n  n   k(n)   sup|f_n - g|\n", alpha);
    for (int n = 0; n <= 10; ++n) {
      double sup = 0.0;
      for (const auto& [label, t] : grid.points(2)) sup = std::max(sup, std::abs(theoretical_fn(g, scheme, n, t) - g.cf(t)));
      std::printf("%3d %6llu   %.3e\n", n, static_cast<unsigned long long>(scheme.count(n)), sup);
    }
  }
}
