#include "psilab/interval_union.hpp"

#include <algorithm>
#include <stdexcept>

#include "psilab/kahan.hpp"

namespace psilab {

IntervalUnion IntervalUnion::normalize(std::vector<Interval> parts,
                                       double merge_tol) {
  std::erase_if(parts, [](const Interval& iv) { return iv.hi < iv.lo; });
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalUnion out;
  for (const Interval& iv : parts) {
    if (!out.intervals_.empty() && iv.lo <= out.intervals_.back().hi + merge_tol) {
      out.intervals_.back().hi = std::max(out.intervals_.back().hi, iv.hi);
    } else {
      out.intervals_.push_back(iv);
    }
  }
  return out;
}

double IntervalUnion::total_measure() const {
  KahanSum s;
  for (const Interval& iv : intervals_) s.add(iv.length());
  return s.value();
}

double IntervalUnion::log_measure() const {
  KahanSum s;
  for (const Interval& iv : intervals_) {
    if (iv.lo <= 0.0)
      throw std::domain_error("log_measure requires strictly positive endpoints");
    s.add(std::log(iv.hi) - std::log(iv.lo));
  }
  return s.value();
}

bool IntervalUnion::contains(double x) const {
  auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), x,
      [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->hi;
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& a,
                                       const IntervalUnion& b,
                                       double merge_tol) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.intervals_.size() && j < b.intervals_.size()) {
    const Interval& x = a.intervals_[i];
    const Interval& y = b.intervals_[j];
    const double lo = std::max(x.lo, y.lo);
    const double hi = std::min(x.hi, y.hi);
    if (hi >= lo) out.push_back({lo, hi});
    if (x.hi < y.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return normalize(std::move(out), merge_tol);
}

IntervalUnion IntervalUnion::clipped(double lo, double hi) const {
  std::vector<Interval> out;
  for (const Interval& iv : intervals_) {
    const double l = std::max(iv.lo, lo);
    const double h = std::min(iv.hi, hi);
    if (h >= l) out.push_back({l, h});
  }
  IntervalUnion u;
  u.intervals_ = std::move(out);
  return u;
}

}  // namespace psilab
