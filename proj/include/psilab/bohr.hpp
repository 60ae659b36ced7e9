#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "psilab/interval_union.hpp"

namespace psilab {

// Rank-k Bohr set description: ||freq_l x + phase_l|| <= radius for all l,
// optionally truncated to [0, t_trunc].
struct BohrSpec {
  std::vector<double> freqs;
  std::vector<double> phases;
  double radius = 0.0;
  std::optional<double> t_trunc;

  std::size_t rank() const { return freqs.size(); }
};

bool bohr_contains(const BohrSpec& spec, double x);

// {x in [0, t] : ||freq x + phase|| <= radius} with exact endpoints.
IntervalUnion constraint_intervals(double freq, double phase, double radius,
                                   double t);

struct BohrMeasure {
  double measure = 0.0;
  IntervalUnion decomposition;
};

// Exact k-way intersection of per-constraint interval unions.
BohrMeasure truncated_measure(const BohrSpec& spec);

long long count_members(const BohrSpec& spec, std::span<const double> points);

struct ExtensionReport {
  long long lhs = 0;             // |A  intersect  B(alpha, beta; rho)|
  double rhs = 0.0;              // (A log T / (eta rho)) window_max mu(rho(1+eta))
  double ratio = 0.0;            // lhs / rhs (the measured implied constant)
  long long window_max = 0;      // max points in a window of the prescribed length
  double window_length = 0.0;
  double extended_measure = 0.0;
};

// Measures both sides of the short-interval concentration bound for counting
// sequence elements in a Bohr set.
ExtensionReport interval_extension_check(const BohrSpec& spec,
                                         const std::vector<double>& points,
                                         double eta, double a_const);

struct AverageMeasureTrial {
  std::vector<double> tuple;
  double grid_max = 0.0;        // lower bound on max-over-phases measure
  double majorant_bound = 0.0;  // upper bound via the smooth majorant
  std::size_t measure_components = 0;
};

struct AverageMeasureReport {
  int k = 0;
  double radius = 0.0;
  double eta = 0.0;
  double t = 0.0;
  int beta_grid = 0;
  bool exhaustive = false;
  std::vector<AverageMeasureTrial> trials;
  double average_grid_max = 0.0;
  double average_majorant_bound = 0.0;
  double benchmark_main = 0.0;  // (2 rho)^k (1+eta)^k T
  double fitted_c = 0.0;        // constant solved from the secondary term
};

// Averages the max-over-phases truncated measure over random frequency
// tuples from a 1/t-spaced pool, bracketing the max between a phase-grid
// lower bound and the majorant upper bound.
AverageMeasureReport average_measure_experiment(
    const std::vector<double>& freq_pool, int k, double radius, double eta,
    double t, int trials, int beta_grid, std::uint64_t seed);

}  // namespace psilab
