#pragma once

#include <vector>

#include "cakemech/geometry.hpp"

namespace cake {

/// Piecewise-constant value density over a cake segment: strictly increasing
/// breakpoints b_0 < ... < b_m spanning the segment and one nonnegative value
/// per cell (b_{t-1}, b_t). The total integral must be strictly positive.
class PiecewiseDensity {
 public:
  PiecewiseDensity(std::vector<double> breakpoints, std::vector<double> values);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  Interval span() const { return Interval(breakpoints_.front(), breakpoints_.back()); }
  std::size_t cell_count() const { return values_.size(); }

  /// Density value at x (cells are half-open on the right; x at the final
  /// breakpoint reads the last cell). x must lie within the span.
  double value_at(double x) const;

  /// Integral over a single interval; the interval must lie within the span.
  double integral(const Interval& window) const;

  double total() const;

  /// Merges adjacent cells with equal value. Not applied automatically:
  /// fixed-cell (homogeneous items) profiles rely on the given breakpoints.
  PiecewiseDensity canonicalized() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Lebesgue integral of the density over the union of the intervals.
/// Overlapping inputs are unioned first, so no region is counted twice.
double value_of(const PiecewiseDensity& density, const IntervalList& set);

/// Agent densities over a common cake together with the induced common
/// refinement (the "homogeneous items" of the instance).
class Profile {
 public:
  Profile(Interval cake, std::vector<PiecewiseDensity> densities);

  const Interval& cake() const { return cake_; }
  int agent_count() const { return static_cast<int>(densities_.size()); }
  const PiecewiseDensity& density(int agent) const { return densities_[agent]; }
  const std::vector<PiecewiseDensity>& densities() const { return densities_; }

  int cell_count() const { return static_cast<int>(cells_.size()); }
  const std::vector<Interval>& cells() const { return cells_; }
  const Interval& cell(int t) const { return cells_[t]; }
  double cell_length(int t) const { return cells_[t].length(); }
  const std::vector<double>& boundaries() const { return boundaries_; }

  /// f_agent(X_t): the agent's constant density on refinement cell t.
  double density_value(int agent, int cell) const {
    return cell_values_[static_cast<std::size_t>(agent) * cells_.size() + cell];
  }

  /// Whole-cell value f_agent(X_t) * |X_t|.
  double cell_value(int agent, int cell) const {
    return density_value(agent, cell) * cells_[cell].length();
  }

  Profile with_density(int agent, PiecewiseDensity replacement) const;
  Profile without_agent(int agent) const;
  Profile permuted(const std::vector<int>& order) const;

 private:
  Interval cake_;
  std::vector<PiecewiseDensity> densities_;
  std::vector<double> boundaries_;
  std::vector<Interval> cells_;
  std::vector<double> cell_values_;  // agent-major
};

/// Builds the profile whose refinement is the sorted union of all agents'
/// breakpoints (near-duplicates within kMergeTol collapsed).
Profile common_refinement(std::vector<PiecewiseDensity> densities, const Interval& cake);

/// Affinely maps the profile onto the target cake.
Profile scale_cake(const Profile& profile, const Interval& target);

/// Profile over the cake minus `removed`, represented as a zero-valued
/// forbidden zone (every density is zeroed there). Used by resource
/// monotonicity checks; utilities of MNW allocations are unaffected by how
/// the dead zone is carried.
Profile restrict_profile(const Profile& profile, const Interval& removed);

}  // namespace cake
