#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cakemech/allocation.hpp"
#include "cakemech/density.hpp"
#include "cakemech/solver.hpp"

namespace cake {

enum class MechanismId {
  kMnw,           // "mnw": complete MNW allocation
  kPa,            // "pa": deterministic partial allocation (rightmost kept)
  kRandomizedPa,  // "rpa": cyclic random kept slice
  kInterp,        // "interp": randomized, factors y_i^c
  kInterpItems,   // "interp-items": deterministic, rightmost y_i^c
  kEf2,           // "ef2": two-agent envy-free mechanism
  kEvenSplit,     // "even-split": every cell split into n equal pieces
};

struct MechanismSpec {
  MechanismId id = MechanismId::kMnw;
  double c = 0.0;         // interpolation parameter, used by interp variants
  std::uint64_t seed = 0; // used by randomized mechanisms

  static MechanismSpec parse(const std::string& name, double c = 0.0,
                             std::uint64_t seed = 0);
  std::string name() const;
};

/// Step 1-3 intermediates of the PA mechanism: the full MNW solution, the
/// n leave-one-out solutions (each over the whole cake), and the factors
/// y_i = prod_{j!=i} v_j(A_j) / prod_{j!=i} v_j(A^i_j).
struct PaIntermediate {
  MnwSolution full;
  std::vector<MnwSolution> leave_out;  // leave_out[i]: agents N \ {i}
  std::vector<double> factors;
};

/// Parameters computed by the two-agent envy-free mechanism. x, y are the
/// role-1/role-2 half points after normalization (x <= y); p, q the half
/// points of [x, y]; swapped records whether agent roles were exchanged.
struct Ef2Trace {
  double x = 0.0;
  double y = 0.0;
  double p = 0.0;
  double q = 0.0;
  bool swapped = false;
  bool contiguous = true;  // branch p <= q ("p<=q" in reports)
};

Allocation run_mnw_mechanism(const Profile& profile);

PaIntermediate pa_factors(const Profile& profile);

Allocation run_pa(const Profile& profile);

Allocation run_randomized_pa(const Profile& profile, std::uint64_t seed);

/// c = 0 reproduces the MNW mechanism exactly (deterministic, seed unused),
/// c = 1 reproduces randomized PA for the same seed.
Allocation run_interpolated(const Profile& profile, double c, std::uint64_t seed);

/// Deterministic homogeneous-items variant: keeps the rightmost y_i^c of
/// each piece. c = 1 equals deterministic PA, c = 0 equals MNW.
Allocation run_interpolated_items(const Profile& profile, double c);

/// Leftmost point h in the segment with value([segment.lo, h]) equal to half
/// the segment's value; the segment's left endpoint if the density vanishes.
double half_point(const PiecewiseDensity& density, const Interval& segment);

std::pair<Allocation, Ef2Trace> run_ef2(const Profile& profile);

Allocation run_even_split(const Profile& profile);

Allocation run_mechanism(const MechanismSpec& spec, const Profile& profile);

/// Utility of `agent` under the mechanism on `profile`, measured against
/// `true_density`. Deterministic mechanisms are evaluated on the realized
/// allocation; randomized PA / interpolation use the closed form
/// y_i^c * v_true(A_i) (no sampling), so the value is seed-independent.
double expected_utility(const MechanismSpec& spec, const Profile& profile,
                        const PiecewiseDensity& true_density, int agent);

}  // namespace cake
