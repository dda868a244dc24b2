// Recover annulus masses of a self-similar Levy measure from its exponent alone.
#include <cstdio>

#include "padic/levy.hpp"

int main() {
  using namespace padic;
  // gamma0 = -3, beta = 2/5, two weighted balls on the unit sphere of Q_3
  const SelfSimilarLevyMeasure<Rational> m(3, Rational(2, 5), -3, 1,
                                           {{{Ball(PAdicNumber::from_integer(1, 3), -1), Rational(1, 7)},
                                             {Ball(PAdicNumber::from_integer(2, 3), -1), Rational(4, 7)}}});
  const auto ev = exponent_evaluator(m);
  std::printf("set            direct              recovered           bound\n");
  for (int i = -2; i <= 1; ++i) {
    const auto r = invert_exponent(ev, i, i + 1);
    std::printf("annulus(%d,%d)  %.15f  %.15f  %.1e\n", i, i + 1, to_double(measure_mass(m, annulus(i, i + 1, 3))), r.value,
                r.error_bound);
  }
  const auto tail = invert_exponent_tail(ev, 0);
  std::printf("tail(0)        %.15f  %.15f  %.1e\n", to_double(measure_mass(m, TailSet{0})), tail.value, tail.error_bound);
}
