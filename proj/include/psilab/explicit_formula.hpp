#pragma once

#include <complex>
#include <vector>

#include "psilab/interval_union.hpp"
#include "psilab/zero_table.hpp"

namespace psilab {

// S(x, t) = sum_{0 < gamma <= t} x^{i gamma}.
std::complex<double> exp_sum(const ZeroTable& table, double x, double t);

// Prefix partial sums S(x, gamma_i) over the table ordinates.
struct ExpSumSeries {
  double x = 0.0;
  std::vector<std::complex<double>> partial;  // partial[i] = S(x, gamma_i)
};

ExpSumSeries build_exp_sum_series(const ZeroTable& table, double x);

struct TruncatedPsi {
  double value = 0.0;             // approximation to psi(x) - x
  double truncation_bound = 0.0;  // sqrt(x) (log(x t))^2 / t
  bool empty_sum = false;         // t_cut below the first ordinate
  bool near_prime_power = false;  // x within 1e-6 of a prime power
};

// -2 sqrt(x) Re sum_{0<gamma<=t_cut} x^{i gamma}/(1/2+i gamma)
//   - log 2pi - (1/2) log(1 - x^{-2}).
TruncatedPsi truncated_psi_error(const ZeroTable& table, double x, double t_cut);

struct TxReport {
  double x = 0.0;
  double eps = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  IntervalUnion t_set;
  double log_integral = 0.0;  // int over t_set of dt/t
  double rhs = 0.0;           // 2 pi eps (1 - alpha^2 - beta) log X
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// Detection set {t : |S(x,t)| >= threshold_coeff * eps * beta * N(t)} over
// the window [X^{alpha sqrt(2 pi eps)}, (log X) sqrt(X)], resolved exactly on
// the ordinate grid (both sides are constant between ordinates).
TxReport detect_Tx(const ZeroTable& table, double x, double big_x, double eps,
                   double alpha, double beta, double threshold_coeff);

double default_threshold_coeff();  // 8 pi

struct PigeonholeResult {
  double t_star = 0.0;
  std::vector<double> x0;    // xs whose detection set contains t_star
  double fraction = 0.0;     // |x0| / |xs|
  double benchmark = 0.0;    // eps * (1 - alpha^2 - beta)
  std::size_t grid_size = 0;
};

// Maximizes |{x : t in T_x}| over a log-uniform t-grid (>= 10^3 candidates).
PigeonholeResult pigeonhole_T(const ZeroTable& table,
                              const std::vector<double>& xs, double big_x,
                              double eps, double alpha, double beta,
                              double threshold_coeff);

}  // namespace psilab
