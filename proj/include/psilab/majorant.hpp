#pragma once

#include <complex>
#include <span>
#include <vector>

namespace psilab {

struct VinogradovParams {
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  // total smoothing width
  int r = 2;           // smoothing order
};

// Periodized smooth majorant of the arc [a, b]: the indicator convolved with
// an r-fold uniform smoothing kernel of total support delta.  Plateau 1 on
// [a + delta/2, b - delta/2], vanishing on [b + delta/2, 1 + a - delta/2],
// in [0, 1] elsewhere.  Closed forms in both time and frequency domains.
class FourierMajorant {
 public:
  explicit FourierMajorant(VinogradovParams p);

  const VinogradovParams& params() const { return params_; }

  // exact time-domain evaluation (piecewise polynomial, period 1)
  double operator()(double x) const;

  // Fourier coefficient a_m of e(mx); a_0 = b - a exactly.
  std::complex<double> coefficient(long m) const;

  // min( 2(b-a), 2/(pi|m|), 2/(pi|m|) (r/(pi|m|delta))^r ), for m != 0
  double coefficient_bound(long m) const;

  // certified upper bound on sum_{|m| > M} |a_m|
  double tail_bound(long order) const;

  // a_0 + 2 sum_{m=1}^{M} Re(a_m e(mx))
  double eval_truncated(double x, long order) const;

  // smallest truncation order with tail_bound <= tol
  long order_for_tolerance(double tol) const;

 private:
  VinogradovParams params_;
};

// Product majorant Psi(x) = prod_l Psi_0(alpha_l x + beta_l) with factor
// parameters a = -rho(1+eta), b = rho(1+eta), delta = 2 rho eta.
class BohrMajorant {
 public:
  BohrMajorant(std::vector<double> freqs, std::vector<double> phases,
               double radius, double eta, int r);

  double operator()(double x) const;
  std::size_t rank() const { return freqs_.size(); }
  const FourierMajorant& factor() const { return factor_; }
  const std::vector<double>& freqs() const { return freqs_; }
  const std::vector<double>& phases() const { return phases_; }
  double radius() const { return radius_; }
  double eta() const { return eta_; }

 private:
  std::vector<double> freqs_;
  std::vector<double> phases_;
  double radius_;
  double eta_;
  FourierMajorant factor_;
};

// Smooth cutoff with compactly supported transform:
// f(x) = (sin(pi x/2) / (pi x/2))^2, transform 2 (1 - 2|xi|)_+.
struct CutoffKernel {
  static double value(double x);
  static double transform(double xi);
  // min over |x| <= 1 equals (2/pi)^2
  static double min_on_unit_interval();
};

struct MajorizedCount {
  double point_sum = 0.0;        // sum over points of Psi
  double integral_main = 0.0;    // m = 0 term of int f(t/T) Psi(t) dt
  double remainder_bound = 0.0;  // certified bound on the m != 0 terms
  bool remainder_exact_support = false;  // true if the resonance-restricted
                                         // sum was enumerated exactly
};

// Pointwise majorized count plus the coefficientwise main-term/remainder
// split of int f(t/T) Psi(t) dt using the truncated-coefficient minima.
MajorizedCount majorized_count(std::span<const double> points,
                               const BohrMajorant& majorant, double t);

// Phase-independent upper bound on mu(B(alpha, beta, T; rho)) via the
// product majorant: (2 rho (1+eta))^k T f(0)-term plus bounded remainder.
double bohr_measure_upper_bound(const std::vector<double>& freqs, double rho,
                                double eta, int r, double t);

}  // namespace psilab
