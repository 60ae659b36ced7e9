#pragma once

#include <cmath>
#include <functional>

namespace psilab {

// Adaptive Simpson quadrature to a relative tolerance.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double rel_tol = 1e-8);

// Distance from x to the nearest integer.
inline double dist_to_nearest_int(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

// Fractional part in [0, 1).
inline double frac_part(double x) { return x - std::floor(x); }

// gamma * log(x) reduced mod 2 pi, formed in extended precision; products up
// to ~1e6 would lose ~20 bits in binary64.
inline double phase_mod_2pi(long double gamma, long double log_x) {
  constexpr long double kTwoPi = 6.283185307179586476925286766559L;
  return static_cast<double>(std::fmod(gamma * log_x, kTwoPi));
}

}  // namespace psilab
