#include "cakemech/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cakemech/errors.hpp"

namespace cake {

namespace {

void check_span(const Interval& window, const Interval& span, const char* what) {
  if (window.lo < span.lo - kCompareTol || window.hi > span.hi + kCompareTol) {
    throw DomainError(std::string(what) + " [" + std::to_string(window.lo) + ", " +
                      std::to_string(window.hi) + "] lies outside the cake [" +
                      std::to_string(span.lo) + ", " + std::to_string(span.hi) + "]");
  }
}

}  // namespace

PiecewiseDensity::PiecewiseDensity(std::vector<double> breakpoints,
                                   std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2) {
    throw InvariantError("density needs at least two breakpoints");
  }
  if (values_.size() + 1 != breakpoints_.size()) {
    throw InvariantError("density has " + std::to_string(values_.size()) +
                         " values for " + std::to_string(breakpoints_.size()) +
                         " breakpoints; expected breakpoints-1 values");
  }
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k - 1] < breakpoints_[k])) {
      throw InvariantError("density breakpoints must be strictly increasing");
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] < 0.0 || !std::isfinite(values_[k])) {
      throw InvariantError("density values must be finite and nonnegative");
    }
    total += values_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
  }
  if (!(total > 0.0)) {
    throw InvariantError("agent values the cake at zero; remove the agent instead");
  }
}

double PiecewiseDensity::value_at(double x) const {
  check_span(Interval(x - kMergeTol, x + kMergeTol), span(), "query point");
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  std::size_t cell = static_cast<std::size_t>(it - breakpoints_.begin());
  if (cell == 0) return values_.front();
  if (cell > values_.size()) return values_.back();
  return values_[cell - 1];
}

double PiecewiseDensity::integral(const Interval& window) const {
  check_span(window, span(), "interval");
  double sum = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double lo = std::max(window.lo, breakpoints_[k]);
    const double hi = std::min(window.hi, breakpoints_[k + 1]);
    if (hi > lo) sum += values_[k] * (hi - lo);
  }
  return sum;
}

double PiecewiseDensity::total() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    sum += values_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
  }
  return sum;
}

PiecewiseDensity PiecewiseDensity::canonicalized() const {
  std::vector<double> bp{breakpoints_.front()};
  std::vector<double> vals;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!vals.empty() && vals.back() == values_[k]) {
      bp.back() = breakpoints_[k + 1];
      continue;
    }
    vals.push_back(values_[k]);
    bp.push_back(breakpoints_[k + 1]);
  }
  return PiecewiseDensity(std::move(bp), std::move(vals));
}

double value_of(const PiecewiseDensity& density, const IntervalList& set) {
  double sum = 0.0;
  for (const Interval& piece : canonical_union(set)) {
    sum += density.integral(piece);
  }
  return sum;
}

Profile::Profile(Interval cake, std::vector<PiecewiseDensity> densities)
    : cake_(cake), densities_(std::move(densities)) {
  if (densities_.empty()) throw DomainError("profile needs at least one agent");

  std::vector<double> merged;
  for (const PiecewiseDensity& density : densities_) {
    const Interval span = density.span();
    if (std::abs(span.lo - cake_.lo) > kMergeTol ||
        std::abs(span.hi - cake_.hi) > kMergeTol) {
      throw DomainError("density span does not match the cake");
    }
    merged.insert(merged.end(), density.breakpoints().begin(),
                  density.breakpoints().end());
  }
  std::sort(merged.begin(), merged.end());
  boundaries_.push_back(cake_.lo);
  for (double b : merged) {
    if (b - boundaries_.back() > kMergeTol) boundaries_.push_back(b);
  }
  // Zero-length final cells from duplicate endpoints are collapsed onto hi.
  if (cake_.hi - boundaries_.back() > kMergeTol) {
    boundaries_.push_back(cake_.hi);
  } else {
    boundaries_.back() = cake_.hi;
  }

  cells_.reserve(boundaries_.size() - 1);
  for (std::size_t t = 1; t < boundaries_.size(); ++t) {
    cells_.emplace_back(boundaries_[t - 1], boundaries_[t]);
  }

  cell_values_.resize(densities_.size() * cells_.size());
  for (std::size_t i = 0; i < densities_.size(); ++i) {
    for (std::size_t t = 0; t < cells_.size(); ++t) {
      const double mid = 0.5 * (cells_[t].lo + cells_[t].hi);
      cell_values_[i * cells_.size() + t] = densities_[i].value_at(mid);
    }
  }
}

Profile Profile::with_density(int agent, PiecewiseDensity replacement) const {
  std::vector<PiecewiseDensity> next = densities_;
  next[agent] = std::move(replacement);
  return Profile(cake_, std::move(next));
}

Profile Profile::without_agent(int agent) const {
  if (agent_count() < 2) throw DomainError("cannot remove the only agent");
  std::vector<PiecewiseDensity> next;
  next.reserve(densities_.size() - 1);
  for (int i = 0; i < agent_count(); ++i) {
    if (i != agent) next.push_back(densities_[i]);
  }
  return Profile(cake_, std::move(next));
}

Profile Profile::permuted(const std::vector<int>& order) const {
  if (static_cast<int>(order.size()) != agent_count()) {
    throw DomainError("permutation size mismatch");
  }
  std::vector<PiecewiseDensity> next;
  next.reserve(densities_.size());
  for (int src : order) next.push_back(densities_[src]);
  return Profile(cake_, std::move(next));
}

Profile common_refinement(std::vector<PiecewiseDensity> densities, const Interval& cake) {
  return Profile(cake, std::move(densities));
}

Profile scale_cake(const Profile& profile, const Interval& target) {
  const Interval& cake = profile.cake();
  const double scale = target.length() / cake.length();
  auto map = [&](double x) { return target.lo + (x - cake.lo) * scale; };

  std::vector<PiecewiseDensity> mapped;
  mapped.reserve(profile.densities().size());
  for (const PiecewiseDensity& density : profile.densities()) {
    std::vector<double> bp;
    bp.reserve(density.breakpoints().size());
    for (double b : density.breakpoints()) bp.push_back(map(b));
    bp.front() = target.lo;
    bp.back() = target.hi;
    mapped.emplace_back(std::move(bp), density.values());
  }
  return Profile(target, std::move(mapped));
}

Profile restrict_profile(const Profile& profile, const Interval& removed) {
  if (!profile.cake().contains(removed)) {
    throw DomainError("removed interval lies outside the cake");
  }
  std::vector<PiecewiseDensity> zeroed;
  zeroed.reserve(profile.densities().size());
  for (const PiecewiseDensity& density : profile.densities()) {
    std::vector<double> bp = density.breakpoints();
    for (double cut : {removed.lo, removed.hi}) {
      auto it = std::lower_bound(bp.begin(), bp.end(), cut);
      const bool present = (it != bp.end() && std::abs(*it - cut) <= kMergeTol) ||
                           (it != bp.begin() && std::abs(*(it - 1) - cut) <= kMergeTol);
      if (!present) bp.insert(it, cut);
    }
    std::vector<double> vals(bp.size() - 1);
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      const double mid = 0.5 * (bp[k] + bp[k + 1]);
      const bool dead = mid > removed.lo && mid < removed.hi;
      vals[k] = dead ? 0.0 : density.value_at(mid);
    }
    zeroed.emplace_back(std::move(bp), std::move(vals));
  }
  return Profile(profile.cake(), std::move(zeroed));
}

}  // namespace cake
