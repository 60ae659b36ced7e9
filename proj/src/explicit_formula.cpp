#include "psilab/explicit_formula.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "psilab/chebyshev_psi.hpp"
#include "psilab/kahan.hpp"
#include "psilab/numerics.hpp"

namespace psilab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double default_threshold_coeff() { return 8.0 * std::numbers::pi; }

std::complex<double> exp_sum(const ZeroTable& table, double x, double t) {
  if (x < 1.0) throw std::domain_error("exp_sum: x >= 1 required (use 1/x symmetry)");
  const std::size_t n = count_zeros(table, t);
  const long double log_x = std::log(static_cast<long double>(x));
  KahanComplexSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = phase_mod_2pi(table.ordinates[i], log_x);
    acc.add({std::cos(phase), std::sin(phase)});
  }
  return acc.value();
}

ExpSumSeries build_exp_sum_series(const ZeroTable& table, double x) {
  if (x < 1.0) throw std::domain_error("exp_sum: x >= 1 required (use 1/x symmetry)");
  ExpSumSeries s;
  s.x = x;
  s.partial.reserve(table.ordinates.size());
  const long double log_x = std::log(static_cast<long double>(x));
  KahanComplexSum acc;
  for (double gamma : table.ordinates) {
    const double phase = phase_mod_2pi(gamma, log_x);
    acc.add({std::cos(phase), std::sin(phase)});
    s.partial.push_back(acc.value());
  }
  return s;
}

TruncatedPsi truncated_psi_error(const ZeroTable& table, double x, double t_cut) {
  if (x < 2.0) throw std::domain_error("truncated_psi_error: x >= 2 required");
  if (t_cut > table.t_max)
    throw std::domain_error("truncated_psi_error: t_cut exceeds table t_max");

  TruncatedPsi r;
  const double nearest = std::round(x);
  r.near_prime_power =
      std::abs(x - nearest) < 1e-6 && nearest >= 2.0 &&
      mangoldt(static_cast<std::uint64_t>(nearest)) > 0.0;

  const std::size_t n = count_zeros(table, std::max(t_cut, 0.0));
  r.empty_sum = (n == 0);

  const long double log_x = std::log(static_cast<long double>(x));
  KahanSum re_sum;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = table.ordinates[i];
    const double phase = phase_mod_2pi(g, log_x);
    // Re( e^{i phase} / (1/2 + i g) ) = (cos/2 + g sin) / (1/4 + g^2)
    re_sum.add((0.5 * std::cos(phase) + g * std::sin(phase)) / (0.25 + g * g));
  }
  r.value = -2.0 * std::sqrt(x) * re_sum.value() - std::log(kTwoPi) -
            0.5 * std::log1p(-1.0 / (x * x));
  const double lxt = std::log(x * t_cut);
  r.truncation_bound = std::sqrt(x) * lxt * lxt / t_cut;
  return r;
}

TxReport detect_Tx(const ZeroTable& table, double x, double big_x, double eps,
                   double alpha, double beta, double threshold_coeff) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
    throw std::domain_error("detect_Tx: alpha, beta in (0,1) required");
  if (eps <= 0.0) throw std::domain_error("detect_Tx: eps > 0 required");

  TxReport rep;
  rep.x = x;
  rep.eps = eps;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.window_lo = std::pow(big_x, alpha * std::sqrt(kTwoPi * eps));
  rep.window_hi = std::log(big_x) * std::sqrt(big_x);
  const double lo = rep.window_lo;
  const double hi = std::min(rep.window_hi, table.t_max);
  if (!(lo < hi))
    throw std::runtime_error(
        "detect_Tx: table too short; need ordinates covering [" +
        std::to_string(rep.window_lo) + ", " + std::to_string(rep.window_hi) + "]");

  const ExpSumSeries series = build_exp_sum_series(table, x);
  const auto& ords = table.ordinates;

  std::vector<Interval> hits;
  // segment [0, gamma_0): S = 0, N = 0, condition 0 >= 0 holds
  auto segment_ok = [&](std::size_t idx) {  // segment [gamma_idx, gamma_{idx+1})
    const double mod = std::abs(series.partial[idx]);
    return mod >= threshold_coeff * eps * beta * static_cast<double>(idx + 1);
  };
  if (ords.front() > lo) hits.push_back({lo, std::min(ords.front(), hi)});
  for (std::size_t i = 0; i < ords.size(); ++i) {
    const double seg_lo = std::max(ords[i], lo);
    const double seg_hi = std::min(i + 1 < ords.size() ? ords[i + 1] : table.t_max, hi);
    if (seg_hi <= seg_lo) continue;
    if (segment_ok(i)) hits.push_back({seg_lo, seg_hi});
  }
  rep.t_set = IntervalUnion::normalize(std::move(hits));
  rep.log_integral = rep.t_set.empty() ? 0.0 : rep.t_set.log_measure();
  rep.rhs = kTwoPi * eps * (1.0 - alpha * alpha - beta) * std::log(big_x);
  return rep;
}

PigeonholeResult pigeonhole_T(const ZeroTable& table,
                              const std::vector<double>& xs, double big_x,
                              double eps, double alpha, double beta,
                              double threshold_coeff) {
  if (xs.empty()) throw std::domain_error("pigeonhole_T: empty xs");

  const double lo = std::pow(big_x, alpha * std::sqrt(kTwoPi * eps));
  const double hi = std::min(std::log(big_x) * std::sqrt(big_x), table.t_max);
  if (!(lo < hi))
    throw std::runtime_error("pigeonhole_T: table too short for the t window");

  PigeonholeResult res;
  res.grid_size = 1000;
  res.benchmark = eps * (1.0 - alpha * alpha - beta);

  // Membership of t in T_x depends only on the last ordinate index <= t.
  std::vector<std::size_t> grid_idx(res.grid_size);
  std::vector<double> grid_t(res.grid_size);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < res.grid_size; ++i) {
    const double t = std::exp(llo + (lhi - llo) * i / static_cast<double>(res.grid_size - 1));
    grid_t[i] = t;
    grid_idx[i] = count_zeros(table, std::min(t, table.t_max));
  }

  std::vector<std::size_t> counts(res.grid_size, 0);
  std::vector<std::vector<bool>> member(xs.size());
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    const ExpSumSeries series = build_exp_sum_series(table, xs[xi]);
    member[xi].resize(res.grid_size);
    for (std::size_t i = 0; i < res.grid_size; ++i) {
      const std::size_t n = grid_idx[i];
      bool ok;
      if (n == 0) {
        ok = true;  // empty sum, zero threshold
      } else {
        ok = std::abs(series.partial[n - 1]) >=
             threshold_coeff * eps * beta * static_cast<double>(n);
      }
      member[xi][i] = ok;
      if (ok) ++counts[i];
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.grid_size; ++i)
    if (counts[i] > counts[best]) best = i;  // ties resolve to smallest t
  res.t_star = grid_t[best];
  for (std::size_t xi = 0; xi < xs.size(); ++xi)
    if (member[xi][best]) res.x0.push_back(xs[xi]);
  res.fraction = static_cast<double>(res.x0.size()) / static_cast<double>(xs.size());
  return res;
}

}  // namespace psilab
