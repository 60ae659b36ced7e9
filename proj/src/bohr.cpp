#include "psilab/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "psilab/kahan.hpp"
#include "psilab/majorant.hpp"
#include "psilab/numerics.hpp"

namespace psilab {

bool bohr_contains(const BohrSpec& spec, double x) {
  for (std::size_t l = 0; l < spec.freqs.size(); ++l) {
    if (dist_to_nearest_int(spec.freqs[l] * x + spec.phases[l]) > spec.radius)
      return false;
  }
  return true;
}

IntervalUnion constraint_intervals(double freq, double phase, double radius,
                                   double t) {
  if (freq == 0.0) throw std::domain_error("constraint_intervals: freq == 0");
  if (!(radius > 0.0 && radius < 0.5))
    throw std::domain_error("constraint_intervals: need 0 < radius < 1/2");
  if (t <= 0.0) throw std::domain_error("constraint_intervals: t <= 0");

  // Negating both freq and phase leaves ||freq x + phase|| unchanged.
  const double f = std::abs(freq);
  const double ph = freq > 0.0 ? phase : -phase;

  // x-interval for integer n: [(n - ph - radius)/f, (n - ph + radius)/f]
  const auto n_lo = static_cast<long long>(std::ceil(ph - radius));       // x >= 0
  const auto n_hi = static_cast<long long>(std::floor(f * t + ph + radius));
  std::vector<Interval> parts;
  parts.reserve(static_cast<std::size_t>(std::max(0LL, n_hi - n_lo + 1)));
  for (long long n = n_lo; n <= n_hi; ++n) {
    const double lo = std::max(0.0, (static_cast<double>(n) - ph - radius) / f);
    const double hi = std::min(t, (static_cast<double>(n) - ph + radius) / f);
    if (hi >= lo) parts.push_back({lo, hi});
  }
  return IntervalUnion::normalize(std::move(parts));
}

BohrMeasure truncated_measure(const BohrSpec& spec) {
  if (!spec.t_trunc) throw std::domain_error("truncated_measure: t_trunc required");
  if (spec.freqs.empty()) throw std::domain_error("truncated_measure: rank 0 spec");
  for (double f : spec.freqs)
    if (f == 0.0) throw std::domain_error("truncated_measure: zero frequency");

  IntervalUnion acc =
      constraint_intervals(spec.freqs[0], spec.phases[0], spec.radius, *spec.t_trunc);
  for (std::size_t l = 1; l < spec.freqs.size() && !acc.empty(); ++l) {
    acc = IntervalUnion::intersect(
        acc, constraint_intervals(spec.freqs[l], spec.phases[l], spec.radius,
                                  *spec.t_trunc));
  }
  BohrMeasure m;
  m.measure = acc.total_measure();
  m.decomposition = std::move(acc);
  return m;
}

long long count_members(const BohrSpec& spec, std::span<const double> points) {
  long long n = 0;
  for (double p : points)
    if (bohr_contains(spec, p)) ++n;
  return n;
}

ExtensionReport interval_extension_check(const BohrSpec& spec,
                                         const std::vector<double>& points,
                                         double eta, double a_const) {
  if (!spec.t_trunc) throw std::domain_error("interval_extension_check: t_trunc required");
  if (eta <= 0.0) throw std::domain_error("interval_extension_check: eta > 0 required");
  const double log_t = std::log(*spec.t_trunc);
  for (double f : spec.freqs) {
    if (std::abs(f) > a_const * log_t)
      throw std::domain_error(
          "interval_extension_check: |freq| = " + std::to_string(std::abs(f)) +
          " violates the A log T hypothesis");
  }

  ExtensionReport rep;
  rep.lhs = count_members(spec, points);
  rep.window_length = 2.0 * eta * spec.radius / (a_const * log_t);

  std::vector<double> sorted(points);
  std::sort(sorted.begin(), sorted.end());
  long long best = 0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    while (sorted[i] - sorted[lo] > rep.window_length) ++lo;
    best = std::max(best, static_cast<long long>(i - lo + 1));
  }
  rep.window_max = best;

  BohrSpec extended = spec;
  extended.radius = spec.radius * (1.0 + eta);
  if (extended.radius >= 0.5)
    throw std::domain_error("interval_extension_check: extended radius >= 1/2");
  rep.extended_measure = truncated_measure(extended).measure;

  rep.rhs = (a_const * log_t / (eta * spec.radius)) *
            static_cast<double>(rep.window_max) * rep.extended_measure;
  rep.ratio = rep.rhs > 0.0 ? static_cast<double>(rep.lhs) / rep.rhs : 0.0;
  return rep;
}

AverageMeasureReport average_measure_experiment(
    const std::vector<double>& freq_pool, int k, double radius, double eta,
    double t, int trials, int beta_grid, std::uint64_t seed) {
  if (k < 1) throw std::domain_error("average_measure_experiment: k >= 1 required");
  if (beta_grid < 4) throw std::domain_error("average_measure_experiment: beta_grid >= 4");
  if (freq_pool.empty()) throw std::domain_error("average_measure_experiment: empty pool");
  {
    std::vector<double> sorted(freq_pool);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] - sorted[i - 1] < 1.0 / t)
        throw std::domain_error(
            "average_measure_experiment: pool spacing below 1/t for pair (" +
            std::to_string(sorted[i - 1]) + ", " + std::to_string(sorted[i]) + ")");
    }
  }

  AverageMeasureReport rep;
  rep.k = k;
  rep.radius = radius;
  rep.eta = eta;
  rep.t = t;
  rep.beta_grid = beta_grid;

  const double pool_n = static_cast<double>(freq_pool.size());
  const double tuple_space = std::pow(pool_n, k);
  rep.exhaustive = tuple_space <= static_cast<double>(trials);
  const std::size_t n_trials =
      rep.exhaustive ? static_cast<std::size_t>(tuple_space)
                     : static_cast<std::size_t>(trials);

  // grid of phase tuples: beta_grid^k combinations (lower bound on the max)
  const auto n_phase =
      static_cast<std::size_t>(std::pow(static_cast<double>(beta_grid), k));
  if (n_phase > (1u << 22))
    throw std::domain_error("average_measure_experiment: beta_grid^k too large");

  KahanSum sum_grid, sum_bound;
  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    AverageMeasureTrial tr;
    tr.tuple.resize(k);
    if (rep.exhaustive) {
      std::size_t code = trial;
      for (int j = 0; j < k; ++j) {
        tr.tuple[j] = freq_pool[code % freq_pool.size()];
        code /= freq_pool.size();
      }
    } else {
      // deterministic per-trial stream: master seed + trial index
      std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (trial + 1));
      std::uniform_int_distribution<std::size_t> pick(0, freq_pool.size() - 1);
      for (int j = 0; j < k; ++j) tr.tuple[j] = freq_pool[pick(rng)];
    }

    BohrSpec spec;
    spec.freqs = tr.tuple;
    spec.phases.assign(k, 0.0);
    spec.radius = radius;
    spec.t_trunc = t;
    for (std::size_t code = 0; code < n_phase; ++code) {
      std::size_t c = code;
      for (int j = 0; j < k; ++j) {
        spec.phases[j] = static_cast<double>(c % beta_grid) / beta_grid;
        c /= beta_grid;
      }
      const BohrMeasure m = truncated_measure(spec);
      if (m.measure > tr.grid_max) {
        tr.grid_max = m.measure;
        tr.measure_components = m.decomposition.component_count();
      }
    }
    tr.majorant_bound = bohr_measure_upper_bound(tr.tuple, radius, eta, 2, t);
    sum_grid.add(tr.grid_max);
    sum_bound.add(tr.majorant_bound);
    rep.trials.push_back(std::move(tr));
  }

  const double n = static_cast<double>(n_trials);
  rep.average_grid_max = sum_grid.value() / n;
  rep.average_majorant_bound = sum_bound.value() / n;
  rep.benchmark_main =
      std::pow(2.0 * radius, k) * std::pow(1.0 + eta, k) * t;
  // secondary term per tuple: (C log((rho eta)^{-1}))^k T / |pool|; solve for C
  const double excess = rep.average_majorant_bound - rep.benchmark_main;
  if (excess > 0.0) {
    rep.fitted_c = std::pow(excess * pool_n / t, 1.0 / k) /
                   std::log(1.0 / (radius * eta));
  }
  return rep;
}

}  // namespace psilab
