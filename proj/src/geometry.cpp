#include "cakemech/geometry.hpp"

#include <algorithm>

#include "cakemech/errors.hpp"

namespace cake {

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo < hi)) {
    throw InvariantError("interval must have positive length: [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

IntervalList canonical_union(IntervalList intervals) {
  if (intervals.empty()) return intervals;
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalList merged;
  merged.reserve(intervals.size());
  merged.push_back(intervals.front());
  for (std::size_t k = 1; k < intervals.size(); ++k) {
    Interval& last = merged.back();
    const Interval& cur = intervals[k];
    if (cur.lo <= last.hi + kMergeTol) {
      last.hi = std::max(last.hi, cur.hi);
    } else {
      merged.push_back(cur);
    }
  }
  return merged;
}

double total_length(const IntervalList& intervals) {
  double sum = 0.0;
  for (const Interval& piece : intervals) sum += piece.length();
  return sum;
}

double intersection_length(const IntervalList& a, const IntervalList& b) {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) sum += hi - lo;
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

IntervalList clip(const IntervalList& intervals, const Interval& window) {
  IntervalList out;
  for (const Interval& piece : intervals) {
    const double lo = std::max(piece.lo, window.lo);
    const double hi = std::min(piece.hi, window.hi);
    if (hi - lo > kMergeTol) out.emplace_back(lo, hi);
  }
  return out;
}

bool covers_point(const IntervalList& intervals, double x) {
  for (const Interval& piece : intervals) {
    if (piece.contains(x)) return true;
  }
  return false;
}

}  // namespace cake
