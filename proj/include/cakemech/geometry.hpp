#pragma once

#include <vector>

namespace cake {

/// Breakpoints closer than this are collapsed during refinement.
inline constexpr double kMergeTol = 1e-12;
/// Default tolerance for value comparisons and invariant checks.
inline constexpr double kCompareTol = 1e-9;

/// Closed interval with positive length.
struct Interval {
  double lo;
  double hi;

  Interval(double lo, double hi);

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const {
    return lo <= other.lo + kMergeTol && other.hi <= hi + kMergeTol;
  }
};

using IntervalList = std::vector<Interval>;

/// Sorts and merges overlapping/touching intervals (within kMergeTol).
IntervalList canonical_union(IntervalList intervals);

double total_length(const IntervalList& intervals);

/// Measure of the pairwise intersection of two canonical lists.
double intersection_length(const IntervalList& a, const IntervalList& b);

/// Clips a canonical list to a window; drops empty remainders.
IntervalList clip(const IntervalList& intervals, const Interval& window);

bool covers_point(const IntervalList& intervals, double x);

}  // namespace cake
