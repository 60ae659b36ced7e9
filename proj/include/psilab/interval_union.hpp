#pragma once

#include <cstddef>
#include <vector>

namespace psilab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Sorted disjoint union of closed intervals.  Endpoints within merge_tol of
// each other are fused so that endpoint arithmetic noise does not create
// spurious components.
class IntervalUnion {
 public:
  static constexpr double kMergeTol = 1e-12;

  IntervalUnion() = default;

  // Normalizes an arbitrary interval list: drops empty pieces, sorts and
  // merges overlapping or near-touching components.
  static IntervalUnion normalize(std::vector<Interval> parts,
                                 double merge_tol = kMergeTol);

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t component_count() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }

  double total_measure() const;

  // Sum of log(hi/lo) over components; requires all lo > 0.
  double log_measure() const;

  bool contains(double x) const;

  // Exact intersection by merged endpoint sweep.
  static IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b,
                                 double merge_tol = kMergeTol);

  // Clip to [lo, hi].
  IntervalUnion clipped(double lo, double hi) const;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace psilab
