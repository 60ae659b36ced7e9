#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "psilab/bohr.hpp"
#include "psilab/numerics.hpp"

using namespace psilab;

TEST_CASE("rank-1 integer-frequency measure has a closed form") {
  BohrSpec spec{{1.0}, {0.0}, 0.1, 10.0};
  BohrMeasure m = truncated_measure(spec);
  // intervals of width 0.2 around integers 0..10, clipped at both ends
  CHECK(m.measure == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.decomposition.component_count() == 11);
}

TEST_CASE("rank-1 general frequency matches the arithmetic construction") {
  const double f = std::numbers::sqrt2, rho = 0.07, t = 25.0;
  BohrSpec spec{{f}, {0.3}, rho, t};
  BohrMeasure m = truncated_measure(spec);
  // each constraint solution is an interval of length 2 rho / f
  double expected = 0.0;
  for (int n = -2; n < 50; ++n) {
    const double lo = (n - 0.3 - rho) / f;
    const double hi = (n - 0.3 + rho) / f;
    expected += std::max(0.0, std::min(hi, t) - std::max(lo, 0.0));
  }
  CHECK(m.measure == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("membership test agrees with the interval decomposition") {
  BohrSpec spec{{std::numbers::sqrt2, std::numbers::e}, {0.1, 0.9}, 0.12, 60.0};
  BohrMeasure m = truncated_measure(spec);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = u(rng);
    bool near_edge = false;
    for (const auto& iv : m.decomposition.intervals())
      if (std::abs(x - iv.lo) < 1e-9 || std::abs(x - iv.hi) < 1e-9)
        near_edge = true;
    if (!near_edge)
      CHECK(m.decomposition.contains(x) == bohr_contains(spec, x));
  }
}

TEST_CASE("exact measure sits within Monte Carlo error") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uf(0.1, 5.0), ut(10.0, 100.0),
      up(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t k = 1 + trial % 3;
    BohrSpec spec;
    for (std::size_t l = 0; l < k; ++l) {
      spec.freqs.push_back(uf(rng));
      spec.phases.push_back(up(rng));
    }
    spec.radius = 0.15;
    const double t = ut(rng);
    spec.t_trunc = t;
    const double exact = truncated_measure(spec).measure;
    const int n = 200000;
    int hits = 0;
    std::uniform_real_distribution<double> ux(0.0, t);
    for (int i = 0; i < n; ++i)
      if (bohr_contains(spec, ux(rng))) ++hits;
    const double p = static_cast<double>(hits) / n;
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-9) / n) * t;
    CHECK(std::abs(exact - p * t) <= 5.0 * se);
  }
}

TEST_CASE("count_members is exact on constructed points") {
  BohrSpec spec{{1.0}, {0.0}, 0.1, 100.0};
  std::vector<double> pts = {0.05, 0.5, 1.02, 2.2, 3.0, 50.95, 99.89};
  // members: ||x|| <= 0.1 -> 0.05, 1.02, 3.0, 50.95
  CHECK(count_members(spec, pts) == 4);
}

TEST_CASE("constraint construction validates its arguments") {
  CHECK_THROWS(constraint_intervals(0.0, 0.1, 0.1, 10.0));  // zero frequency
  CHECK_THROWS(constraint_intervals(1.0, 0.1, 0.6, 10.0));  // radius >= 1/2
  CHECK_THROWS(constraint_intervals(1.0, 0.1, 0.0, 10.0));  // radius <= 0
}

TEST_CASE("negative frequencies give the mirrored solution set") {
  BohrSpec pos{{2.0}, {0.3}, 0.05, 30.0};
  BohrSpec neg{{-2.0}, {-0.3}, 0.05, 30.0};
  // ||-fx - b|| = ||fx + b||, so the sets coincide
  CHECK(truncated_measure(pos).measure ==
        doctest::Approx(truncated_measure(neg).measure).epsilon(1e-12));
  for (double x : {0.1, 0.85, 1.15, 7.3})
    CHECK(bohr_contains(pos, x) == bohr_contains(neg, x));
}

TEST_CASE("extension check validates the frequency-size hypothesis") {
  BohrSpec spec{{100.0}, {0.0}, 0.05, 50.0};
  std::vector<double> pts = {1.0, 2.0, 3.0};
  // |freq| = 100 > a_const log T for a_const = 1
  CHECK_THROWS(interval_extension_check(spec, pts, 0.1, 1.0));
}

TEST_CASE("extension bound dominates the observed intersection count") {
  BohrSpec spec{{1.3}, {0.2}, 0.1, 200.0};
  std::vector<double> pts;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int i = 0; i < 400; ++i) pts.push_back(u(rng));
  std::sort(pts.begin(), pts.end());
  ExtensionReport r = interval_extension_check(spec, pts, 0.3, 1.0);
  CHECK(r.lhs == count_members(spec, pts));
  CHECK(r.rhs > 0.0);
  CHECK(r.window_max >= 1);
  CHECK(r.ratio == doctest::Approx(static_cast<double>(r.lhs) / r.rhs));
}

TEST_CASE("average-measure experiment is deterministic and bracketed") {
  std::vector<double> pool;
  for (int i = 0; i < 12; ++i) pool.push_back(1.0 + 0.11 * i);
  AverageMeasureReport a =
      average_measure_experiment(pool, 2, 0.05, 0.2, 50.0, 6, 4, 99);
  AverageMeasureReport b =
      average_measure_experiment(pool, 2, 0.05, 0.2, 50.0, 6, 4, 99);
  CHECK(a.average_grid_max == b.average_grid_max);
  CHECK(a.average_majorant_bound == b.average_majorant_bound);
  CHECK(a.average_grid_max <= a.average_majorant_bound * (1.0 + 1e-9));
  for (const auto& trial : a.trials)
    CHECK(trial.grid_max <= trial.majorant_bound * (1.0 + 1e-9));
  CHECK(a.benchmark_main == doctest::Approx(std::pow(2.0 * 0.05 * 1.2, 2) * 50.0));
}

TEST_CASE("average-measure pool spacing below 1/T is rejected") {
  std::vector<double> pool = {1.0, 1.0 + 1e-6, 2.0};
  CHECK_THROWS(average_measure_experiment(pool, 2, 0.05, 0.2, 50.0, 4, 4, 1));
}
