#include "psilab/majorant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "psilab/kahan.hpp"
#include "psilab/numerics.hpp"

namespace psilab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// CDF of the sum of r independent uniforms on [0, 1] (Irwin-Hall).
double irwin_hall_cdf(double s, int r) {
  if (s <= 0.0) return 0.0;
  if (s >= r) return 1.0;
  double fact = 1.0;
  for (int i = 2; i <= r; ++i) fact *= i;
  double sum = 0.0;
  const int jmax = static_cast<int>(std::floor(s));
  for (int j = 0; j <= jmax; ++j) {
    const double term = binomial(r, j) * std::pow(s - j, r);
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum / fact;
}

double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

void validate_params(const VinogradovParams& p) {
  if (p.r < 1) throw std::invalid_argument("majorant: smoothing order r >= 1 required");
  if (!(p.delta > 0.0 && p.delta < 0.5))
    throw std::invalid_argument("majorant: 0 < delta < 1/2 violated");
  const double len = p.b - p.a;
  if (!(p.delta <= len))
    throw std::invalid_argument("majorant: delta <= b - a violated");
  if (!(len <= 1.0 - p.delta))
    throw std::invalid_argument("majorant: b - a <= 1 - delta violated");
}

}  // namespace

FourierMajorant::FourierMajorant(VinogradovParams p) : params_(p) {
  validate_params(params_);
}

double FourierMajorant::operator()(double x) const {
  const double a = params_.a, b = params_.b, d = params_.delta;
  const int r = params_.r;
  // reduce x into the fundamental window starting at the support's left edge
  const double c = a - 0.5 * d;
  const double y = c + frac_part(x - c);
  const double w = d / r;  // width of one uniform smoothing factor
  // kernel CDF: G(u) = IH((u + d/2) / w)
  const double ga = irwin_hall_cdf((y - a + 0.5 * d) / w, r);
  const double gb = irwin_hall_cdf((y - b + 0.5 * d) / w, r);
  return ga - gb;
}

std::complex<double> FourierMajorant::coefficient(long m) const {
  const double a = params_.a, b = params_.b, d = params_.delta;
  if (m == 0) return {b - a, 0.0};
  const double md = static_cast<double>(m);
  // box transform: int_a^b e(-m x) dx
  const std::complex<double> box =
      std::polar(sinc(kPi * md * (b - a)) * (b - a), -kPi * md * (a + b));
  const double kern = std::pow(sinc(kPi * md * d / params_.r), params_.r);
  return box * kern;
}

double FourierMajorant::coefficient_bound(long m) const {
  if (m == 0) return params_.b - params_.a;
  const double am = std::abs(static_cast<double>(m));
  const double b1 = 2.0 * (params_.b - params_.a);
  const double b2 = 2.0 / (kPi * am);
  const double b3 = b2 * std::pow(params_.r / (kPi * am * params_.delta), params_.r);
  return std::min(b1, std::min(b2, b3));
}

double FourierMajorant::tail_bound(long order) const {
  if (order < 1) throw std::invalid_argument("tail_bound: order >= 1");
  const int r = params_.r;
  const double d = params_.delta;
  // two certified regimes: |a_m| <= 2/(pi m) always, and additionally
  // |a_m| <= (2/(pi m)) (r/(pi m d))^r, which dominates past m0 = r/(pi d)
  const double m0 = std::ceil(r / (kPi * d));
  double harmonic = 0.0;
  double start = static_cast<double>(order);
  if (m0 > start) {
    // sum_{order < m <= m0} 1/m <= 1/(order+1) + log(m0/(order+1))
    harmonic = (2.0 / kPi) *
               (1.0 / (order + 1.0) + std::log(m0 / (order + 1.0)));
    start = m0;
  }
  // integral comparison past the crossover:
  // sum_{m > start} (2/pi)(r/(pi d))^r m^{-(r+1)}
  //   <= (2/pi)(r/(pi d))^r start^{-r} / r
  const double power =
      (2.0 / kPi) * std::pow(r / (kPi * d), r) * std::pow(start, -r) / r;
  return 2.0 * (harmonic + power);  // both signs of m
}

double FourierMajorant::eval_truncated(double x, long order) const {
  KahanSum acc;
  acc.add(params_.b - params_.a);
  for (long m = 1; m <= order; ++m) {
    const std::complex<double> am = coefficient(m);
    const double ph = kTwoPi * m * x;
    acc.add(2.0 * (am.real() * std::cos(ph) - am.imag() * std::sin(ph)));
  }
  return acc.value();
}

long FourierMajorant::order_for_tolerance(double tol) const {
  for (long m = 16; m <= (1L << 24); m *= 2) {
    if (tail_bound(m) <= tol) return m;
  }
  throw std::runtime_error("order_for_tolerance: tolerance unreachable");
}

BohrMajorant::BohrMajorant(std::vector<double> freqs, std::vector<double> phases,
                           double radius, double eta, int r)
    : freqs_(std::move(freqs)),
      phases_(std::move(phases)),
      radius_(radius),
      eta_(eta),
      factor_(VinogradovParams{-radius * (1.0 + eta), radius * (1.0 + eta),
                               2.0 * radius * eta, r}) {
  if (freqs_.size() != phases_.size() || freqs_.empty())
    throw std::invalid_argument("bohr majorant: freqs/phases size mismatch");
  if (!(radius > 0.0 && eta > 0.0))
    throw std::invalid_argument("bohr majorant: radius, eta > 0 required");
}

double BohrMajorant::operator()(double x) const {
  double prod = 1.0;
  for (std::size_t l = 0; l < freqs_.size(); ++l) {
    prod *= factor_(freqs_[l] * x + phases_[l]);
    if (prod == 0.0) break;
  }
  return prod;
}

double CutoffKernel::value(double x) {
  const double z = 0.5 * kPi * x;
  if (z == 0.0) return 1.0;
  const double s = std::sin(z) / z;
  return s * s;
}

double CutoffKernel::transform(double xi) {
  return 2.0 * std::max(0.0, 1.0 - 2.0 * std::abs(xi));
}

double CutoffKernel::min_on_unit_interval() {
  return (2.0 / kPi) * (2.0 / kPi);
}

namespace {

// sum over |m| <= order of coefficient_bound, m = 0 excluded
double truncated_l1(const FourierMajorant& f, long order) {
  KahanSum s;
  for (long m = 1; m <= order; ++m) s.add(f.coefficient_bound(m));
  return 2.0 * s.value();
}

struct RemainderSplit {
  double bound = 0.0;
  bool exact_support = false;
};

// Bound on T * sum_{mvec != 0, |sum m_l alpha_l| <= supp/T} prod a'_{m_l},
// enumerated exactly for rank <= 2 and bounded crudely otherwise.
RemainderSplit resonant_remainder(const std::vector<double>& freqs,
                                  const FourierMajorant& factor, double t,
                                  double supp) {
  RemainderSplit out;
  const std::size_t k = freqs.size();
  const long order = 1024;
  const double tail = factor.tail_bound(order);
  const double l1_trunc = truncated_l1(factor, order);
  const double a0 = factor.coefficient_bound(0);
  const double s1 = a0 + l1_trunc + tail;

  // bounds depend only on |m|; table them once instead of re-deriving
  std::vector<double> cb(order + 1);
  cb[0] = a0;
  for (long m = 1; m <= order; ++m) cb[m] = factor.coefficient_bound(m);

  if (k == 1) {
    KahanSum acc;
    for (long m = -order; m <= order; ++m) {
      if (m == 0) continue;
      if (std::abs(m * freqs[0]) * t <= supp) acc.add(cb[std::labs(m)]);
    }
    // vectors with an index beyond the truncation order
    out.bound = t * (acc.value() + tail);
    out.exact_support = true;
    return out;
  }
  if (k == 2 && order * order <= (1L << 22)) {
    KahanSum acc;
    for (long m1 = -order; m1 <= order; ++m1) {
      const double c1 = cb[std::labs(m1)];
      if (c1 * s1 * t < 1e-18) continue;
      for (long m2 = -order; m2 <= order; ++m2) {
        if (m1 == 0 && m2 == 0) continue;
        if (std::abs(m1 * freqs[0] + m2 * freqs[1]) * t <= supp)
          acc.add(c1 * cb[std::labs(m2)]);
      }
    }
    out.bound = t * (acc.value() + (std::pow(s1, 2) - std::pow(s1 - tail, 2)));
    out.exact_support = true;
    return out;
  }
  // crude: ignore the support restriction entirely
  out.bound = t * (std::pow(s1, static_cast<double>(k)) -
                   std::pow(a0, static_cast<double>(k)));
  out.exact_support = false;
  return out;
}

}  // namespace

MajorizedCount majorized_count(std::span<const double> points,
                               const BohrMajorant& majorant, double t) {
  MajorizedCount out;
  KahanSum ps;
  for (double p : points) ps.add(majorant(p));
  out.point_sum = ps.value();

  const double a0 = majorant.factor().coefficient_bound(0);  // 2 rho (1+eta)
  const double k = static_cast<double>(majorant.rank());
  out.integral_main = std::pow(a0, k) * t * CutoffKernel::transform(0.0);
  // f(./T) transform support is [-1/(2T), 1/(2T)], peak 2T
  auto rem = resonant_remainder(majorant.freqs(), majorant.factor(), t, 0.5);
  out.remainder_bound = 2.0 * rem.bound;
  out.remainder_exact_support = rem.exact_support;
  return out;
}

double bohr_measure_upper_bound(const std::vector<double>& freqs, double rho,
                                double eta, int r, double t) {
  // mu(B(alpha,beta,T;rho)) <= (pi/2)^2 int f((x - T/2)/(T/2)) Psi(x) dx:
  // f >= (2/pi)^2 on [0, T] and Psi >= indicator pointwise.
  BohrMajorant maj(freqs, std::vector<double>(freqs.size(), 0.0), rho, eta, r);
  const double a0 = maj.factor().coefficient_bound(0);
  const double k = static_cast<double>(freqs.size());
  const double half_t = 0.5 * t;
  const double main = std::pow(a0, k) * half_t * CutoffKernel::transform(0.0);
  auto rem = resonant_remainder(freqs, maj.factor(), half_t, 0.5);
  const double integral = main + 2.0 * rem.bound;
  return integral / CutoffKernel::min_on_unit_interval();
}

}  // namespace psilab
