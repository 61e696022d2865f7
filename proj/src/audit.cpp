#include "cakemech/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cakemech/errors.hpp"
#include "cakemech/solver.hpp"

namespace cake {

AuditReport audit(const Profile& profile, const Allocation& alloc, double tol) {
  const int n = profile.agent_count();
  if (static_cast<int>(alloc.bundles.size()) != n) {
    throw DomainError("allocation has the wrong number of agents");
  }

  AuditReport report;
  report.utilities = utilities(profile, alloc);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double envy =
          value_of(profile.density(i), alloc.bundles[j]) - report.utilities[i];
      if (envy > report.envy_magnitude) {
        report.envy_magnitude = envy;
        report.envy_i = i;
        report.envy_j = j;
      }
    }
    const double fair_share = profile.density(i).total() / n;
    const double shortfall = fair_share - report.utilities[i];
    if (shortfall > report.worst_shortfall) {
      report.worst_shortfall = shortfall;
      report.shortfall_agent = i;
    }
  }
  report.envy_free = report.envy_magnitude <= tol;
  report.proportional = report.worst_shortfall <= tol;
  report.nash_welfare = nash_welfare(profile, alloc);

  try {
    const MnwSolution mnw = solve_mnw(profile, /*complete=*/true);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      worst = std::min(worst, report.utilities[i] / mnw.utilities[i]);
    }
    report.mnw_approx = worst;
  } catch (const std::exception& failure) {
    report.mnw_error = failure.what();
  }
  return report;
}

bool dominates(const Profile& profile, const Allocation& a, const Allocation& b,
               double tol) {
  const std::vector<double> ua = utilities(profile, a);
  const std::vector<double> ub = utilities(profile, b);
  bool strict = false;
  for (std::size_t i = 0; i < ua.size(); ++i) {
    if (ua[i] < ub[i] - tol) return false;
    if (ua[i] > ub[i] + tol) strict = true;
  }
  return strict;
}

}  // namespace cake
