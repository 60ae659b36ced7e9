#include <random>
#include <vector>

#include <doctest.h>

#include "psilab/interval_union.hpp"

using namespace psilab;

TEST_CASE("normalization merges overlapping and touching intervals") {
  IntervalUnion u = IntervalUnion::normalize({{0.0, 1.0}, {0.5, 2.0}, {3.0, 4.0}, {4.0, 5.0}});
  CHECK(u.component_count() == 2);
  CHECK(u.total_measure() == doctest::Approx(4.0));
  CHECK(u.contains(1.5));
  CHECK(u.contains(4.0));
  CHECK_FALSE(u.contains(2.5));
}

TEST_CASE("endpoints within merge tolerance coalesce") {
  IntervalUnion u = IntervalUnion::normalize({{0.0, 1.0}, {1.0 + 1e-13, 2.0}});
  CHECK(u.component_count() == 1);
}

TEST_CASE("clipping restricts to a window") {
  IntervalUnion u = IntervalUnion::normalize({{-1.0, 0.5}, {1.0, 3.0}});
  IntervalUnion c = u.clipped(0.0, 2.0);
  CHECK(c.total_measure() == doctest::Approx(1.5));
  CHECK_FALSE(c.contains(-0.5));
  CHECK_FALSE(c.contains(2.5));
}

namespace {

bool brute_member(const std::vector<Interval>& iv, double x) {
  for (const auto& i : iv)
    if (i.lo <= x && x <= i.hi) return true;
  return false;
}

}  // namespace

TEST_CASE("intersection agrees with pointwise membership") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.0, 10.0);
  std::uniform_real_distribution<double> len(0.01, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Interval> a, b;
    for (int i = 0; i < 8; ++i) {
      double lo = pos(rng);
      a.push_back({lo, lo + len(rng)});
      lo = pos(rng);
      b.push_back({lo, lo + len(rng)});
    }
    IntervalUnion ua = IntervalUnion::normalize(a), ub = IntervalUnion::normalize(b);
    IntervalUnion both = IntervalUnion::intersect(ua, ub);
    for (int s = 0; s < 400; ++s) {
      const double x = pos(rng) * 1.15;
      const bool expect = brute_member(a, x) && brute_member(b, x);
      // skip points within tolerance of any endpoint; merging may flip them
      bool near_edge = false;
      for (const auto& i : a)
        if (std::abs(x - i.lo) < 1e-9 || std::abs(x - i.hi) < 1e-9)
          near_edge = true;
      for (const auto& i : b)
        if (std::abs(x - i.lo) < 1e-9 || std::abs(x - i.hi) < 1e-9)
          near_edge = true;
      if (!near_edge) CHECK(both.contains(x) == expect);
    }
    CHECK(both.total_measure() <= ua.total_measure() + 1e-12);
    CHECK(both.total_measure() <= ub.total_measure() + 1e-12);
  }
}

TEST_CASE("log-measure matches the closed form for a single interval") {
  IntervalUnion u = IntervalUnion::normalize({{2.0, 8.0}});
  CHECK(u.log_measure() == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}
