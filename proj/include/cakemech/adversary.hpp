#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "cakemech/density.hpp"
#include "cakemech/mechanisms.hpp"

namespace cake {

/// Finite, deterministically enumerable family of candidate misreports for
/// one agent. Candidate breakpoints are the union of the instance's true
/// refinement boundaries and a uniform grid (cake length / grid_denominator
/// steps); candidate values come from a finite set; reports use at most
/// `max_cells` cells. The agent's true density is always member number 0.
struct MisreportFamily {
  int grid_denominator = 8;
  std::vector<double> value_set{0.0, 1.0, 2.0, 3.0};
  int max_cells = 4;
  bool values_only = false;  // fixed cells: enumerate value vectors only

  /// Desk-scale default: grid step 1/8 plus true boundaries, values
  /// {0,1,2,3}, at most 4 cells.
  static MisreportFamily desk_default() { return MisreportFamily{}; }

  /// Values-only family over an instance's fixed refinement cells
  /// (the homogeneous-items view: breakpoints are not manipulable).
  static MisreportFamily values_grid(std::vector<double> values) {
    MisreportFamily family;
    family.value_set = std::move(values);
    family.values_only = true;
    return family;
  }
};

/// Materializes the family for one agent in enumeration order (index 0 is
/// the agent's true density). Zero-total reports are excluded.
std::vector<PiecewiseDensity> enumerate_family(const MisreportFamily& family,
                                               const Profile& profile, int agent);

struct AttackResult {
  double best_ratio = 1.0;
  PiecewiseDensity best_misreport;
  double truthful_utility = 0.0;
  double manipulated_utility = 0.0;
  std::size_t candidates = 0;
  std::size_t skipped = 0;  // candidates the mechanism failed on (logged)
};

/// Evaluates expected_utility for every misreport in the family (measured
/// against the agent's true density) and returns the maximizer, breaking
/// ties toward the earliest enumeration index. Candidates the mechanism
/// fails on are skipped and counted, never treated as ratio 0.
AttackResult best_response_search(const MechanismSpec& spec, const Profile& profile,
                                  int agent, const MisreportFamily& family);

/// Max best-response ratio over all instances and agents: a certified lower
/// bound on the mechanism's incentive ratio over the searched space.
double incentive_ratio_sweep(const MechanismSpec& spec,
                             const std::vector<Profile>& instances,
                             const MisreportFamily& family_spec);

/// Hard instance behind the 2 - 1/n bound for the MNW mechanism: cake [0,3],
/// f_1 = (n, n-1, 0), f_i = (0, 1, n-1); the misreport is (eps, 1, n-1).
std::pair<Profile, PiecewiseDensity> gen_mnw_lb(int n, double eps);

/// Hard instance behind the e^{1/e} bound for PA on a cake: cake [0,n],
/// f_1 = 1 on [1-h, 1] with h = ((n-1)/n)^{n-1}, others uniform; the
/// misreport is uniform on [0,1].
std::pair<Profile, PiecewiseDensity> gen_pa_lb(int n);

/// Two-agent 4/3 instance for the envy-free mechanism: f_1 = 1 on [0,1/2],
/// f_2 uniform; the misreport is uniform.
std::pair<Profile, PiecewiseDensity> gen_ef2_lb();

/// Interpolation lower-bound family with m = (k+1)n unit items.
/// which in 1..n: agent j != which values item j at kn+1 and 1 elsewhere,
/// agent `which` is uniform. which = n+1: every agent i values item i at
/// kn+1 and 1 elsewhere.
Profile gen_interp_lb(int n, int k, int which);

}  // namespace cake
