#include "psilab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace psilab {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("quadrature: max depth reached");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double rel_tol) {
  if (!(a < b)) throw std::domain_error("quadrature: need a < b");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  // Relative tolerance anchored at the larger of the coarse estimate and the
  // integrand's sampled magnitude scale; a cancellation-heavy integrand (tiny
  // integral, order-one values) would otherwise force an unattainable
  // absolute target.
  const double lq = f(0.5 * (a + m)), rq = f(0.5 * (m + b));
  const double mag =
      (b - a) * std::max({std::abs(fa), std::abs(fm), std::abs(fb),
                          std::abs(lq), std::abs(rq)});
  const double tol = std::max({std::abs(whole), mag, 1e-30}) * rel_tol;
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

}  // namespace psilab
