#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace psilab {

// Sorted positive ordinates of critical-line zeta zeros.  Immutable after
// load; safe to share across threads.
struct ZeroTable {
  std::vector<double> ordinates;
  std::string source_id;
  double t_max = 0.0;
};

// One ordinate per line, decimal, strictly ascending; '#' lines are comments.
ZeroTable load_zero_table(const std::filesystem::path& path);

// Builds a table from an in-memory ordinate list (test fixtures, synthetic
// experiments).  Validates the same invariants as the file loader except the
// first-ordinate range, which only applies to genuine zeta tables.
ZeroTable make_zero_table(std::vector<double> ordinates, std::string source_id,
                          bool require_zeta_range = false);

// N(t): number of ordinates <= t.  Throws if t > t_max (the table cannot
// answer) or t < 0.
std::size_t count_zeros(const ZeroTable& table, double t);

// Riemann-von Mangoldt zero-counting approximation.
// asymptotic: t log t / (2 pi);  refined: (t/2pi) log(t/2pi) - t/2pi + 7/8.
double riemann_von_mangoldt(double t, bool refined);

struct PairCorrelation {
  long long observed = 0;   // ordered pairs with gamma - gamma' in the window
  double predicted = 0.0;   // finite-height prediction: form factor against
                            // the local density log(gamma/2pi)/2pi per zero
  double predicted_asymptotic = 0.0;  // integral * t log t / 2pi (one-sided)
  double predicted_two_sided = 0.0;   // integral * t log t / pi (conjugate
                                      // ordinates on both half-lines)
  double integral = 0.0;    // int_a^b (1 - (sin pi u / pi u)^2) du
  double window_lo = 0.0;   // 2 pi a / log t
  double window_hi = 0.0;   // 2 pi b / log t
};

PairCorrelation pair_correlation(const ZeroTable& table, double t, double a,
                                 double b);

// Ordered pairs (diagonal included) with |gamma - gamma'| <= w / log t.
long long close_pair_count(const ZeroTable& table, double t, double w);

struct ZeroPartition {
  std::vector<std::size_t> n1;  // indices of zeros in low-count windows
  std::vector<std::size_t> n2;  // indices of zeros in crowded windows
  double interval_length = 0.0;  // 1 / log t
  double k_param = 0.0;
  double c_param = 0.0;
  double t = 0.0;
  double n2_fraction = 0.0;      // |n2| / N(t)
  bool n2_bound_ok = false;      // |n2| <= N(t) / (200 k_param)
};

// Grid of half-open windows [j/log t, (j+1)/log t) anchored at 0; windows
// holding more than c_param * k_param zeros contribute their zeros to n2.
ZeroPartition partition_zeros(const ZeroTable& table, double t, double k_param,
                              double c_param);

}  // namespace psilab
