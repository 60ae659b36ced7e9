#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace psilab {

// log p if n = p^k, else 0.
double mangoldt(std::uint64_t n);

// Exact jump structure of psi(x) = sum_{n <= x} Lambda(n) up to limit_x.
// Immutable after construction; all scans are pure reads.
struct PsiSeries {
  std::uint64_t limit_x = 0;
  std::vector<std::uint64_t> jump_points;  // prime powers <= limit_x, ascending
  std::vector<double> jump_values;         // log p per jump
  std::vector<double> cumulative;          // cumulative[n] = psi(n), n = 0..limit_x

  double psi_at(std::uint64_t n) const { return cumulative[n]; }
  // psi(x) = psi(floor(x)); jumps are attributed right-continuously.
  double psi(double x) const;
};

// Segmented sieve; deterministic output independent of segment size.
PsiSeries build_psi_series(std::uint64_t limit_x);

struct ErrorSample {
  double x = 0.0;
  double psi_x = 0.0;
  double err = 0.0;         // psi(x) - x
  double normalized = 0.0;  // err / (sqrt(x) log^2 x)
  double schoenfeld_ratio = 0.0;  // |err| * 8 pi / (sqrt(x) log^2 x)
};

ErrorSample error_term(const PsiSeries& series, double x);

struct LargeValueScan {
  double measure = 0.0;                 // Lebesgue measure of the exceeding set
  std::vector<ErrorSample> witnesses;   // one representative per component
  std::vector<double> separated_subset; // greedy x_hi^sep_exponent-separated
};

// Exact measure of {x in [x_lo, x_hi] : |psi(x) - x| >= eps sqrt(x) log^2 x},
// resolved piecewise between jumps with 1e-9 bisection at crossings.
LargeValueScan large_value_scan(const PsiSeries& series, double x_lo,
                                double x_hi, double eps, double sep_exponent);

struct WintnerMoment {
  double moment = 0.0;  // int_2^X |psi(x)-x|^k dx, piecewise closed form
  double bound = 0.0;   // (2 k^2 / pi)^k X^{k+1}
  double ratio = 0.0;
};

WintnerMoment wintner_moment(const PsiSeries& series, double limit_x, int k);

// int dx/x over {x in [16, limit_x] : |psi(x)-x| >= c sqrt(x) (log log x)^2}.
double log_measure_exceptional(const PsiSeries& series, double limit_x,
                               double c);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> mass;      // sums to 1
  std::size_t grid_points = 0;   // u-grid density used for sampling
};

// Distribution of (psi(e^u) - e^u) / e^{u/2} on a uniform u-grid.
Histogram empirical_distribution(const PsiSeries& series, double u_max,
                                 int bins);

// Checkpoint cache: CSV "x,psi" with binary64 round-trip formatting.
void save_psi_cache(const PsiSeries& series, const std::filesystem::path& path);
// Returns false (and leaves series untouched) when the cache is missing or
// keyed to a different limit_x.
bool load_psi_cache(const std::filesystem::path& path, std::uint64_t limit_x,
                    PsiSeries& series);

}  // namespace psilab
