#pragma once

#include <cstdint>
#include <vector>

#include "cakemech/density.hpp"
#include "cakemech/geometry.hpp"

namespace cake {

/// Per-agent, per-refinement-cell allocated lengths (homogeneous-items view).
class ShareMatrix {
 public:
  ShareMatrix(std::vector<Interval> cells, int agents);

  int agent_count() const { return agents_; }
  int cell_count() const { return static_cast<int>(cells_.size()); }
  const std::vector<Interval>& cells() const { return cells_; }

  double at(int agent, int cell) const {
    return lengths_[static_cast<std::size_t>(agent) * cells_.size() + cell];
  }
  double& at(int agent, int cell) {
    return lengths_[static_cast<std::size_t>(agent) * cells_.size() + cell];
  }

  double column_sum(int cell) const;

  /// Throws InvariantError if entries are negative, exceed their cell, or a
  /// column over/under-fills its cell (the latter only when complete).
  void validate(bool complete, double tol = kCompareTol) const;

 private:
  std::vector<Interval> cells_;
  int agents_;
  std::vector<double> lengths_;
};

/// Positioned allocation: per agent a finite union of intervals, pairwise
/// disjoint across agents up to measure zero.
struct Allocation {
  std::vector<IntervalList> bundles;
  bool complete = false;
};

enum class Placement {
  kLeftToRight,     // pack agents in index order from each cell's left end
  kRightmostPack,   // pack agents in index order from each cell's right end
  kCyclicRandom,    // rotated packing: uniform start per cell, then in order
};

Allocation realize(const ShareMatrix& shares, Placement policy, std::uint64_t seed = 0);

/// Inverse of realize up to positions: lengths[i][t] = |A_i ∩ X_t|.
/// Throws InvariantError if bundles overlap by more than measure zero.
ShareMatrix to_share_matrix(const Profile& profile, const Allocation& alloc);

std::vector<double> utilities(const Profile& profile, const Allocation& alloc);

/// Geometric mean of utilities; 0 if any agent gets nothing.
double nash_welfare(const Profile& profile, const Allocation& alloc);

/// The rightmost `fraction` of a piece, e.g. fraction 0.5 of (0,1) -> [0.5, 1].
/// Returns an empty list when fraction is (numerically) zero.
IntervalList rightmost_fraction(const Interval& piece, double fraction);

/// Cyclic slice of `piece` of the given fraction starting at `start`
/// (wraps around the right end). One or two intervals.
IntervalList cyclic_fraction(const Interval& piece, double fraction, double start);

}  // namespace cake
