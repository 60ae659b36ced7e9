#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "psilab/bohr.hpp"
#include "psilab/majorant.hpp"
#include "psilab/numerics.hpp"

using namespace psilab;

namespace {

// quadrature oracle for the Fourier coefficient of the periodized majorant
std::complex<double> coeff_oracle(const FourierMajorant& f, long m) {
  const double lo = f.params().a - f.params().delta;  // covers the support
  const double re = adaptive_quadrature(
      [&](double x) {
        return f(x) * std::cos(-2.0 * std::numbers::pi * m * x);
      },
      lo, lo + 1.0, 1e-10);
  const double im = adaptive_quadrature(
      [&](double x) {
        return f(x) * std::sin(-2.0 * std::numbers::pi * m * x);
      },
      lo, lo + 1.0, 1e-10);
  return {re, im};
}

}  // namespace

TEST_CASE("zeroth coefficient is the arc length exactly") {
  FourierMajorant f({-0.1, 0.1, 0.04, 2});
  CHECK(f.coefficient(0).real() == 0.2);
  CHECK(f.coefficient(0).imag() == 0.0);
}

TEST_CASE("coefficients match direct quadrature") {
  FourierMajorant f({-0.12, 0.07, 0.05, 2});
  for (long m : {1L, 2L, 5L, 17L}) {
    auto got = f.coefficient(m);
    auto want = coeff_oracle(f, m);
    CHECK(std::abs(got - want) < 1e-8);
  }
  FourierMajorant f3({0.2, 0.55, 0.08, 3});
  for (long m : {1L, 3L, 11L}) {
    CHECK(std::abs(f3.coefficient(m) - coeff_oracle(f3, m)) < 1e-8);
  }
}

TEST_CASE("time domain: plateau, support, and partial smoothing") {
  FourierMajorant f({-0.1, 0.1, 0.04, 2});
  CHECK(f(0.0) == doctest::Approx(1.0));
  CHECK(f(0.07) == doctest::Approx(1.0));    // inside the plateau
  CHECK(f(0.5) == doctest::Approx(0.0));     // far outside
  CHECK(f(0.1) == doctest::Approx(0.5));     // arc edge: half the kernel mass
  const double v = f(0.11);
  CHECK(v > 0.0);
  CHECK(v < 0.5);
  CHECK(f(1.0) == doctest::Approx(f(0.0)));  // period 1
  CHECK(f(-0.07) == doctest::Approx(1.0));
}

TEST_CASE("bump is 1 on the inner plateau, 0 far away, in [0,1] always") {
  // The smoothing eats delta/2 at each end: the guaranteed plateau is
  // [a + delta/2, b - delta/2], and the support is [a - delta/2, b + delta/2].
  FourierMajorant f({-0.13, 0.09, 0.06, 2});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng);
    if (x >= -0.13 + 0.03 && x <= 0.09 - 0.03) CHECK(f(x) >= 1.0 - 1e-12);
    if (x > 0.09 + 0.03 && x < 1.0 - 0.13 - 0.03) CHECK(f(x) == 0.0);
    CHECK(f(x) >= -1e-15);
    CHECK(f(x) <= 1.0 + 1e-12);
  }
}

TEST_CASE("coefficient bounds hold for every m up to 10^4") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(-0.3, 0.0), uw(0.05, 0.3),
      ud(0.01, 0.04);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = ua(rng);
    const double b = a + uw(rng);
    const double d = ud(rng);
    const int r = 2 + (trial % 3);
    FourierMajorant f({a, b, d, r});
    for (long m = 1; m <= 10000; ++m) {
      CHECK(std::abs(f.coefficient(m)) <=
            f.coefficient_bound(m) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("truncated series is certified by the tail bound") {
  FourierMajorant f({-0.1, 0.1, 0.04, 2});
  const long order = 64;
  const double tail = f.tail_bound(order);
  CHECK(tail > 0.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    CHECK(std::abs(f.eval_truncated(x, order) - f(x)) <= tail);
  }
  CHECK(f.tail_bound(256) < tail);  // tails shrink with the order
  const long enough = f.order_for_tolerance(1e-4);
  CHECK(f.tail_bound(enough) <= 1e-4);
}

TEST_CASE("tail bound stays finite for extreme smoothing widths") {
  // tiny delta once sent the explicit loop into ~10^12 iterations
  FourierMajorant f({-5e-4, 5e-4, 1e-12, 2});
  const double tail = f.tail_bound(1024);
  CHECK(std::isfinite(tail));
  CHECK(tail > 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(FourierMajorant({-0.1, 0.1, 0.0, 2}));   // delta > 0
  CHECK_THROWS(FourierMajorant({-0.1, 0.1, 0.6, 2}));   // delta < 1/2
  CHECK_THROWS(FourierMajorant({0.0, 0.01, 0.04, 2}));  // arc narrower than delta
}

TEST_CASE("cutoff kernel values and transform support") {
  CHECK(CutoffKernel::value(0.0) == doctest::Approx(1.0));
  CHECK(CutoffKernel::value(1.0) ==
        doctest::Approx(0.40528473456935116).epsilon(1e-12));
  CHECK(CutoffKernel::min_on_unit_interval() ==
        doctest::Approx(0.40528473456935116).epsilon(1e-12));
  CHECK(CutoffKernel::transform(0.0) == doctest::Approx(2.0));
  CHECK(CutoffKernel::transform(0.25) == doctest::Approx(1.0));
  CHECK(CutoffKernel::transform(0.5) == 0.0);
  CHECK(CutoffKernel::transform(0.7) == 0.0);
  // the transform integrates to f(0) = 1
  const double total = adaptive_quadrature(
      [](double xi) { return CutoffKernel::transform(xi); }, -0.6, 0.6, 1e-10);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("product majorant dominates the Bohr indicator") {
  std::vector<double> freqs = {std::numbers::sqrt2, std::numbers::e};
  std::vector<double> phases = {0.2, 0.7};
  const double rho = 0.08, eta = 0.15;
  BohrMajorant maj(freqs, phases, rho, eta, 2);
  BohrSpec spec{freqs, phases, rho, {}};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng);
    if (bohr_contains(spec, x)) CHECK(maj(x) >= 1.0 - 1e-9);
    CHECK(maj(x) >= -1e-15);
  }
}

TEST_CASE("majorized integral bounds the exact Bohr measure") {
  const double rho = 0.05, eta = 0.2, t = 200.0;
  for (auto freqs : {std::vector<double>{std::numbers::sqrt2},
                     std::vector<double>{std::numbers::sqrt2, 1.7320508}}) {
    BohrSpec spec{freqs, std::vector<double>(freqs.size(), 0.0), rho, t};
    const double exact = truncated_measure(spec).measure;
    const double upper =
        bohr_measure_upper_bound(freqs, rho, eta, 2, t);
    CHECK(upper >= exact * (1.0 - 1e-9));
  }
}

TEST_CASE("pointwise majorized count dominates the member count") {
  std::vector<double> freqs = {std::numbers::sqrt2};
  std::vector<double> phases = {0.35};
  BohrMajorant maj(freqs, phases, 0.05, 0.2, 2);
  BohrSpec spec{freqs, phases, 0.05, 100.0};
  std::vector<double> points;
  for (int i = 0; i < 500; ++i) points.push_back(0.2 * i);
  MajorizedCount c = majorized_count(points, maj, 100.0);
  CHECK(c.point_sum >=
        static_cast<double>(count_members(spec, points)) * (1.0 - 1e-9));
  CHECK(c.integral_main > 0.0);
  CHECK(c.remainder_bound >= 0.0);
}
