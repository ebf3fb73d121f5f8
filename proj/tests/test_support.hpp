#pragma once

#include <cmath>
#include <random>

#include "symvmf/orient.hpp"

namespace symvmf::testing {

inline UnitQuaternion random_unit_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double a = normal(rng), b = normal(rng), c = normal(rng), d = normal(rng);
    if (a * a + b * b + c * c + d * d > 1e-12) return UnitQuaternion(a, b, c, d);
  }
}

// Independent power-series evaluation of log I_nu(x) in extended
// precision; usable for x up to a few hundred.
inline double log_bessel_series_oracle(int nu, double x) {
  const long double h = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= nu; ++i) term *= h / i;
  long double sum = term;
  const long double h2 = h * h;
  for (int k = 1; k < 2000; ++k) {
    term *= h2 / (static_cast<long double>(k) * (nu + k));
    sum += term;
    if (term < sum * 1e-24L) break;
  }
  return static_cast<double>(std::log(sum));
}

}  // namespace symvmf::testing
