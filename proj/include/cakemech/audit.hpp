#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cakemech/allocation.hpp"
#include "cakemech/density.hpp"

namespace cake {

struct AuditReport {
  std::vector<double> utilities;

  bool envy_free = true;
  double envy_magnitude = 0.0;  // max_{i,j} v_i(A_j) - v_i(A_i)
  int envy_i = -1;
  int envy_j = -1;

  bool proportional = true;
  double worst_shortfall = 0.0;  // max_i v_i(cake)/n - v_i(A_i)
  int shortfall_agent = -1;

  double nash_welfare = 0.0;

  /// min_i v_i(A_i) / v_i(A_i^MNW); empty if the MNW solve failed,
  /// with the failure reason in mnw_error.
  std::optional<double> mnw_approx;
  std::string mnw_error;
};

/// Fairness/efficiency audit of an allocation against a profile. Invokes
/// solve_mnw once for the alpha-MNW field; a solver failure is reported in
/// mnw_error while the other fields are still filled in.
AuditReport audit(const Profile& profile, const Allocation& alloc,
                  double tol = kCompareTol);

/// True iff every agent weakly prefers `a` to `b` and at least one strictly
/// (by more than tol).
bool dominates(const Profile& profile, const Allocation& a, const Allocation& b,
               double tol = kCompareTol);

}  // namespace cake
