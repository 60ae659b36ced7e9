#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "psilab/kahan.hpp"
#include "psilab/numerics.hpp"

using namespace psilab;

TEST_CASE("quadrature matches closed forms") {
  CHECK(adaptive_quadrature([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(adaptive_quadrature([](double x) { return std::sin(x); }, 0.0,
                            std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("quadrature reproduces the pair-correlation window integral") {
  // independent oracle value for int_{1/2}^{1} (1 - (sin pi u / pi u)^2) du
  const double val = adaptive_quadrature(
      [](double u) {
        const double s = std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
        return 1.0 - s * s;
      },
      0.5, 1.0, 1e-10);
  CHECK(val == doctest::Approx(0.43543583816126774).epsilon(1e-9));
}

TEST_CASE("nearest-integer distance and fractional part") {
  CHECK(dist_to_nearest_int(0.5) == doctest::Approx(0.5));
  CHECK(dist_to_nearest_int(1.25) == doctest::Approx(0.25));
  CHECK(dist_to_nearest_int(-0.3) == doctest::Approx(0.3));
  CHECK(dist_to_nearest_int(7.0) == doctest::Approx(0.0));
  CHECK(frac_part(-0.25) == doctest::Approx(0.75));
  CHECK(frac_part(3.5) == doctest::Approx(0.5));
}

TEST_CASE("phase reduction agrees with direct complex power") {
  const double x = 12345.0;
  const double log_x = std::log(x);
  for (double gamma : {14.134725142, 1000.25, 74920.827498599}) {
    const double ph = phase_mod_2pi(gamma, log_x);
    CHECK(ph >= 0.0);
    CHECK(ph < 2.0 * std::numbers::pi);
    const std::complex<double> direct =
        std::exp(std::complex<double>(0.0, gamma * log_x));
    CHECK(std::abs(std::polar(1.0, ph) - direct) < 1e-6);
  }
}

TEST_CASE("compensated summation beats naive accumulation") {
  // 1 + 1e16 * eps-sized terms: naive summation loses them entirely
  KahanSum s;
  s.add(1e16);
  for (int i = 0; i < 10000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == doctest::Approx(10000.0).epsilon(1e-12));
}

TEST_CASE("complex compensated summation is componentwise exact") {
  KahanComplexSum s;
  s.add({1e16, -1e16});
  for (int i = 0; i < 1000; ++i) s.add({0.5, 0.25});
  s.add({-1e16, 1e16});
  CHECK(s.value().real() == doctest::Approx(500.0));
  CHECK(s.value().imag() == doctest::Approx(250.0));
}
