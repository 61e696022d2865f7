#include "cakemech/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cakemech/errors.hpp"
#include "cakemech/rng.hpp"

namespace cake {

namespace {

// Stream id for the (agent, cell) substream of a randomized mechanism.
// Draws depend only on (seed, agent, cell), never on evaluation order.
std::uint64_t piece_stream(int agent, int cell) {
  return (static_cast<std::uint64_t>(agent) << 24) |
         (static_cast<std::uint64_t>(cell) + 1);
}

// Walks the left-to-right realization of a share matrix and reports each
// agent's positioned piece per cell.
template <typename Visit>
void for_each_piece(const ShareMatrix& shares, Visit&& visit) {
  for (int t = 0; t < shares.cell_count(); ++t) {
    const Interval& cell = shares.cells()[t];
    double cursor = cell.lo;
    for (int i = 0; i < shares.agent_count(); ++i) {
      const double len = shares.at(i, t);
      if (len <= 0.0) continue;
      const double hi = std::min(cursor + len, cell.hi);
      if (hi - cursor > kMergeTol) visit(i, t, Interval(cursor, hi));
      cursor += len;
    }
  }
}

// Common tail of the PA family: keep a y_i fraction of every MNW piece,
// either the rightmost part or a seeded cyclic slice.
Allocation partial_allocation(const Profile& profile, const ShareMatrix& mnw_shares,
                              const std::vector<double>& factors, bool cyclic,
                              std::uint64_t seed) {
  Allocation out;
  out.bundles.assign(profile.agent_count(), {});
  out.complete = false;
  for_each_piece(mnw_shares, [&](int agent, int cell, const Interval& piece) {
    IntervalList kept;
    if (cyclic) {
      Rng rng(seed, piece_stream(agent, cell));
      const double start = piece.lo + rng.next_double() * piece.length();
      kept = cyclic_fraction(piece, factors[agent], start);
    } else {
      kept = rightmost_fraction(piece, factors[agent]);
    }
    for (const Interval& part : kept) out.bundles[agent].push_back(part);
  });
  for (IntervalList& bundle : out.bundles) bundle = canonical_union(bundle);
  return out;
}

std::vector<double> powered_factors(const std::vector<double>& factors, double c) {
  if (c == 1.0) return factors;
  std::vector<double> powered(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    powered[i] = std::pow(factors[i], c);
  }
  return powered;
}

void require_interpolation_parameter(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw DomainError("interpolation parameter must lie in [0, 1]");
  }
}

}  // namespace

MechanismSpec MechanismSpec::parse(const std::string& name, double c,
                                   std::uint64_t seed) {
  MechanismSpec spec;
  spec.c = c;
  spec.seed = seed;
  if (name == "mnw") {
    spec.id = MechanismId::kMnw;
  } else if (name == "pa") {
    spec.id = MechanismId::kPa;
  } else if (name == "rpa") {
    spec.id = MechanismId::kRandomizedPa;
  } else if (name == "interp") {
    spec.id = MechanismId::kInterp;
  } else if (name == "interp-items") {
    spec.id = MechanismId::kInterpItems;
  } else if (name == "ef2") {
    spec.id = MechanismId::kEf2;
  } else if (name == "even-split") {
    spec.id = MechanismId::kEvenSplit;
  } else {
    throw InputError("unknown mechanism id: " + name);
  }
  return spec;
}

std::string MechanismSpec::name() const {
  switch (id) {
    case MechanismId::kMnw: return "mnw";
    case MechanismId::kPa: return "pa";
    case MechanismId::kRandomizedPa: return "rpa";
    case MechanismId::kInterp: return "interp";
    case MechanismId::kInterpItems: return "interp-items";
    case MechanismId::kEf2: return "ef2";
    case MechanismId::kEvenSplit: return "even-split";
  }
  return "?";
}

Allocation run_mnw_mechanism(const Profile& profile) {
  const MnwSolution solution = solve_mnw(profile, /*complete=*/true);
  Allocation alloc = realize(solution.shares, Placement::kLeftToRight);
  alloc.complete = true;
  return alloc;
}

PaIntermediate pa_factors(const Profile& profile) {
  const int n = profile.agent_count();
  MnwSolution full = solve_mnw(profile, /*complete=*/true);
  std::vector<MnwSolution> leave_out;
  std::vector<double> factors(n, 1.0);
  if (n >= 2) {
    double log_total = 0.0;
    std::vector<double> log_u(n, 0.0);
    for (int i = 0; i < n; ++i) {
      log_u[i] = std::log(full.utilities[i]);
      log_total += log_u[i];
    }
    leave_out.reserve(n);
    for (int i = 0; i < n; ++i) {
      MnwSolution sub = solve_mnw(profile.without_agent(i), /*complete=*/true);
      double log_denominator = 0.0;
      for (double u : sub.utilities) log_denominator += std::log(u);
      factors[i] = std::exp(log_total - log_u[i] - log_denominator);
      leave_out.push_back(std::move(sub));
    }
  }
  return PaIntermediate{std::move(full), std::move(leave_out), std::move(factors)};
}

Allocation run_pa(const Profile& profile) {
  const PaIntermediate pa = pa_factors(profile);
  return partial_allocation(profile, pa.full.shares, pa.factors, /*cyclic=*/false, 0);
}

Allocation run_randomized_pa(const Profile& profile, std::uint64_t seed) {
  const PaIntermediate pa = pa_factors(profile);
  return partial_allocation(profile, pa.full.shares, pa.factors, /*cyclic=*/true, seed);
}

Allocation run_interpolated(const Profile& profile, double c, std::uint64_t seed) {
  require_interpolation_parameter(c);
  if (c == 0.0) return run_mnw_mechanism(profile);
  const PaIntermediate pa = pa_factors(profile);
  return partial_allocation(profile, pa.full.shares, powered_factors(pa.factors, c),
                            /*cyclic=*/true, seed);
}

Allocation run_interpolated_items(const Profile& profile, double c) {
  require_interpolation_parameter(c);
  if (c == 0.0) return run_mnw_mechanism(profile);
  const PaIntermediate pa = pa_factors(profile);
  return partial_allocation(profile, pa.full.shares, powered_factors(pa.factors, c),
                            /*cyclic=*/false, 0);
}

double half_point(const PiecewiseDensity& density, const Interval& segment) {
  const double target = 0.5 * density.integral(segment);
  if (!(target > 0.0)) return segment.lo;
  const std::vector<double>& bp = density.breakpoints();
  const std::vector<double>& vals = density.values();
  double cum = 0.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const double lo = std::max(bp[k], segment.lo);
    const double hi = std::min(bp[k + 1], segment.hi);
    if (hi <= lo) continue;
    const double add = vals[k] * (hi - lo);
    if (cum + add >= target) {
      if (vals[k] > 0.0) return lo + (target - cum) / vals[k];
      return lo;  // flat-zero crossing: leftmost admissible point
    }
    cum += add;
  }
  return segment.hi;
}

std::pair<Allocation, Ef2Trace> run_ef2(const Profile& profile) {
  if (profile.agent_count() != 2) {
    throw DomainError("the two-agent envy-free mechanism needs exactly 2 agents");
  }
  const Interval cake = profile.cake();
  const double x_first = half_point(profile.density(0), cake);
  const double y_second = half_point(profile.density(1), cake);
  const bool swapped = x_first > y_second;

  const PiecewiseDensity& role1 = profile.density(swapped ? 1 : 0);
  const PiecewiseDensity& role2 = profile.density(swapped ? 0 : 1);
  const double x = swapped ? y_second : x_first;
  const double y = swapped ? x_first : y_second;

  double p = x;
  double q = x;
  if (y - x > kMergeTol) {
    const Interval middle(x, y);
    p = half_point(role1, middle);
    q = half_point(role2, middle);
  }

  Ef2Trace trace;
  trace.x = x;
  trace.y = y;
  trace.p = p;
  trace.q = q;
  trace.swapped = swapped;
  trace.contiguous = p <= q;

  IntervalList bundle1;
  IntervalList bundle2;
  auto push = [](IntervalList& bundle, double lo, double hi) {
    if (hi - lo > kMergeTol) bundle.emplace_back(lo, hi);
  };
  if (p <= q) {
    push(bundle1, cake.lo, p);
    push(bundle2, p, cake.hi);
  } else {
    push(bundle1, cake.lo, x);
    push(bundle1, p, y);
    push(bundle2, x, p);
    push(bundle2, y, cake.hi);
  }

  Allocation alloc;
  alloc.complete = true;
  alloc.bundles.assign(2, {});
  alloc.bundles[swapped ? 1 : 0] = canonical_union(bundle1);
  alloc.bundles[swapped ? 0 : 1] = canonical_union(bundle2);
  return {std::move(alloc), trace};
}

Allocation run_even_split(const Profile& profile) {
  const int n = profile.agent_count();
  Allocation alloc;
  alloc.complete = true;
  alloc.bundles.assign(n, {});
  for (int t = 0; t < profile.cell_count(); ++t) {
    const Interval& cell = profile.cell(t);
    const double step = cell.length() / n;
    for (int i = 0; i < n; ++i) {
      const double lo = cell.lo + i * step;
      const double hi = (i + 1 == n) ? cell.hi : cell.lo + (i + 1) * step;
      if (hi - lo > kMergeTol) alloc.bundles[i].emplace_back(lo, hi);
    }
  }
  for (IntervalList& bundle : alloc.bundles) bundle = canonical_union(bundle);
  return alloc;
}

Allocation run_mechanism(const MechanismSpec& spec, const Profile& profile) {
  switch (spec.id) {
    case MechanismId::kMnw: return run_mnw_mechanism(profile);
    case MechanismId::kPa: return run_pa(profile);
    case MechanismId::kRandomizedPa: return run_randomized_pa(profile, spec.seed);
    case MechanismId::kInterp: return run_interpolated(profile, spec.c, spec.seed);
    case MechanismId::kInterpItems: return run_interpolated_items(profile, spec.c);
    case MechanismId::kEf2: return run_ef2(profile).first;
    case MechanismId::kEvenSplit: return run_even_split(profile);
  }
  throw DomainError("unknown mechanism id");
}

double expected_utility(const MechanismSpec& spec, const Profile& profile,
                        const PiecewiseDensity& true_density, int agent) {
  if (agent < 0 || agent >= profile.agent_count()) {
    throw DomainError("expected_utility: agent index out of range");
  }
  switch (spec.id) {
    case MechanismId::kMnw:
    case MechanismId::kPa:
    case MechanismId::kInterpItems:
    case MechanismId::kEf2:
    case MechanismId::kEvenSplit: {
      const Allocation alloc = run_mechanism(spec, profile);
      return value_of(true_density, alloc.bundles[agent]);
    }
    case MechanismId::kRandomizedPa: {
      const PaIntermediate pa = pa_factors(profile);
      const Allocation mnw = realize(pa.full.shares, Placement::kLeftToRight);
      return pa.factors[agent] * value_of(true_density, mnw.bundles[agent]);
    }
    case MechanismId::kInterp: {
      require_interpolation_parameter(spec.c);
      if (spec.c == 0.0) {
        const Allocation alloc = run_mnw_mechanism(profile);
        return value_of(true_density, alloc.bundles[agent]);
      }
      const PaIntermediate pa = pa_factors(profile);
      const Allocation mnw = realize(pa.full.shares, Placement::kLeftToRight);
      const double factor = spec.c == 1.0 ? pa.factors[agent]
                                          : std::pow(pa.factors[agent], spec.c);
      return factor * value_of(true_density, mnw.bundles[agent]);
    }
  }
  throw DomainError("unknown mechanism id");
}

}  // namespace cake
