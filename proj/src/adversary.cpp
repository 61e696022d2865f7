#include "cakemech/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "cakemech/errors.hpp"
#include "cakemech/solver.hpp"

namespace cake {

namespace {

bool positive_total(const std::vector<double>& boundaries,
                    const std::vector<double>& values) {
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    total += values[k] * (boundaries[k + 1] - boundaries[k]);
  }
  return total > 0.0;
}

// Odometer over value_set^cells; zero-total assignments are skipped by the
// caller. Returns false once exhausted.
bool advance(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < base) return true;
    digits[k] = 0;
  }
  return false;
}

// Expected utility of `agent` against its true density, with the attacked
// agent's leave-one-out Nash product cached: PA Step 2 does not depend on
// the agent's report, so the denominator is shared by every candidate.
class Evaluator {
 public:
  Evaluator(const MechanismSpec& spec, const Profile& profile, int agent)
      : spec_(spec), truth_(profile.density(agent)), agent_(agent) {
    const bool pa_family = spec_.id == MechanismId::kPa ||
                           spec_.id == MechanismId::kRandomizedPa ||
                           spec_.id == MechanismId::kInterpItems ||
                           (spec_.id == MechanismId::kInterp && spec_.c > 0.0);
    if (pa_family && profile.agent_count() >= 2) {
      const MnwSolution sub =
          solve_mnw(profile.without_agent(agent), /*complete=*/true);
      double log_denominator = 0.0;
      for (double u : sub.utilities) log_denominator += std::log(u);
      log_denominator_ = log_denominator;
    }
  }

  double operator()(const Profile& reported) const {
    switch (spec_.id) {
      case MechanismId::kEvenSplit:
        return value_of(truth_, run_even_split(reported).bundles[agent_]);
      case MechanismId::kEf2:
        return value_of(truth_, run_ef2(reported).first.bundles[agent_]);
      case MechanismId::kMnw:
        return mnw_value(reported);
      case MechanismId::kInterp:
        if (spec_.c == 0.0) return mnw_value(reported);
        return pa_family_value(reported, /*rightmost=*/false, spec_.c);
      case MechanismId::kRandomizedPa:
        return pa_family_value(reported, /*rightmost=*/false, 1.0);
      case MechanismId::kPa:
        return pa_family_value(reported, /*rightmost=*/true, 1.0);
      case MechanismId::kInterpItems:
        if (spec_.c == 0.0) return mnw_value(reported);
        return pa_family_value(reported, /*rightmost=*/true, spec_.c);
    }
    throw DomainError("unknown mechanism id");
  }

 private:
  double mnw_value(const Profile& reported) const {
    const MnwSolution solution = solve_mnw(reported, /*complete=*/true);
    const Allocation alloc = realize(solution.shares, Placement::kLeftToRight);
    return value_of(truth_, alloc.bundles[agent_]);
  }

  double factor(const MnwSolution& full, double exponent) const {
    if (full.utilities.size() == 1) return 1.0;
    double log_numerator = 0.0;
    for (int j = 0; j < static_cast<int>(full.utilities.size()); ++j) {
      if (j != agent_) log_numerator += std::log(full.utilities[j]);
    }
    const double y = std::exp(log_numerator - *log_denominator_);
    return exponent == 1.0 ? y : std::pow(y, exponent);
  }

  // For rightmost keeps, the realized slice is integrated against the true
  // density; for cyclic keeps, the closed form y * v_true(piece) applies.
  double pa_family_value(const Profile& reported, bool rightmost,
                         double exponent) const {
    const MnwSolution full = solve_mnw(reported, /*complete=*/true);
    const Allocation mnw = realize(full.shares, Placement::kLeftToRight);
    const double y = factor(full, exponent);
    if (!rightmost) return y * value_of(truth_, mnw.bundles[agent_]);

    double kept_value = 0.0;
    for (const Interval& piece : mnw.bundles[agent_]) {
      for (const Interval& kept : rightmost_fraction(piece, y)) {
        kept_value += truth_.integral(kept);
      }
    }
    return kept_value;
  }

  MechanismSpec spec_;
  PiecewiseDensity truth_;
  int agent_;
  std::optional<double> log_denominator_;
};

}  // namespace

std::vector<PiecewiseDensity> enumerate_family(const MisreportFamily& family,
                                               const Profile& profile, int agent) {
  if (agent < 0 || agent >= profile.agent_count()) {
    throw DomainError("misreport family: agent index out of range");
  }
  const Interval cake = profile.cake();
  std::vector<PiecewiseDensity> out;
  out.push_back(profile.density(agent));

  if (family.values_only) {
    const std::vector<double>& boundaries = profile.boundaries();
    std::vector<std::size_t> digits(profile.cell_count(), 0);
    std::vector<double> values(profile.cell_count(), 0.0);
    do {
      for (std::size_t k = 0; k < digits.size(); ++k) {
        values[k] = family.value_set[digits[k]];
      }
      if (positive_total(boundaries, values)) out.emplace_back(boundaries, values);
    } while (advance(digits, family.value_set.size()));
    return out;
  }

  // Candidate interior boundaries: uniform grid plus the true refinement.
  std::vector<double> interior;
  for (int j = 1; j < family.grid_denominator; ++j) {
    interior.push_back(cake.lo + cake.length() * j / family.grid_denominator);
  }
  for (std::size_t t = 1; t + 1 < profile.boundaries().size(); ++t) {
    interior.push_back(profile.boundaries()[t]);
  }
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end(),
                             [](double a, double b) { return b - a <= kMergeTol; }),
                 interior.end());

  const int max_cells = std::max(1, family.max_cells);
  for (int cells = 1; cells <= max_cells; ++cells) {
    const int cuts = cells - 1;
    if (cuts > static_cast<int>(interior.size())) break;

    std::vector<int> choice(cuts);
    for (int k = 0; k < cuts; ++k) choice[k] = k;
    while (true) {
      std::vector<double> boundaries;
      boundaries.reserve(cells + 1);
      boundaries.push_back(cake.lo);
      for (int k = 0; k < cuts; ++k) boundaries.push_back(interior[choice[k]]);
      boundaries.push_back(cake.hi);

      std::vector<std::size_t> digits(cells, 0);
      std::vector<double> values(cells, 0.0);
      do {
        for (std::size_t k = 0; k < digits.size(); ++k) {
          values[k] = family.value_set[digits[k]];
        }
        if (positive_total(boundaries, values)) out.emplace_back(boundaries, values);
      } while (advance(digits, family.value_set.size()));

      // next combination of interior cut positions
      int k = cuts - 1;
      while (k >= 0 && choice[k] == static_cast<int>(interior.size()) - cuts + k) --k;
      if (k < 0) break;
      ++choice[k];
      for (int f = k + 1; f < cuts; ++f) choice[f] = choice[f - 1] + 1;
    }
  }
  return out;
}

AttackResult best_response_search(const MechanismSpec& spec, const Profile& profile,
                                  int agent, const MisreportFamily& family) {
  const std::vector<PiecewiseDensity> candidates =
      enumerate_family(family, profile, agent);
  const Evaluator evaluate(spec, profile, agent);

  const double truthful = evaluate(profile);
  if (!(truthful > 0.0)) {
    throw DomainError("truthful utility is nonpositive; ratio undefined");
  }

  double best_value = truthful;
  std::size_t best_index = 0;
  std::size_t skipped = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    try {
      const double value = evaluate(profile.with_density(agent, candidates[k]));
      if (value > best_value) {
        best_value = value;
        best_index = k;
      }
    } catch (const std::exception&) {
      ++skipped;  // mechanism failed on this candidate; never counted as 0
    }
  }

  return AttackResult{best_value / truthful, candidates[best_index], truthful,
                      best_value, candidates.size(), skipped};
}

double incentive_ratio_sweep(const MechanismSpec& spec,
                             const std::vector<Profile>& instances,
                             const MisreportFamily& family_spec) {
  if (instances.empty()) throw DomainError("sweep needs at least one instance");
  double worst = 1.0;
  for (const Profile& instance : instances) {
    for (int agent = 0; agent < instance.agent_count(); ++agent) {
      const AttackResult result =
          best_response_search(spec, instance, agent, family_spec);
      worst = std::max(worst, result.best_ratio);
    }
  }
  return worst;
}

std::pair<Profile, PiecewiseDensity> gen_mnw_lb(int n, double eps) {
  if (n < 2) throw DomainError("mnw-lb needs n >= 2");
  if (!(eps > 0.0)) throw DomainError("mnw-lb needs eps > 0");
  const std::vector<double> bp{0.0, 1.0, 2.0, 3.0};
  std::vector<PiecewiseDensity> densities;
  densities.emplace_back(bp, std::vector<double>{double(n), double(n - 1), 0.0});
  for (int i = 1; i < n; ++i) {
    densities.emplace_back(bp, std::vector<double>{0.0, 1.0, double(n - 1)});
  }
  Profile profile(Interval(0.0, 3.0), std::move(densities));
  PiecewiseDensity misreport(bp, std::vector<double>{eps, 1.0, double(n - 1)});
  return {std::move(profile), std::move(misreport)};
}

std::pair<Profile, PiecewiseDensity> gen_pa_lb(int n) {
  if (n < 2) throw DomainError("pa-lb needs n >= 2");
  const double h = std::pow((n - 1.0) / n, n - 1.0);
  std::vector<PiecewiseDensity> densities;
  densities.emplace_back(std::vector<double>{0.0, 1.0 - h, 1.0, double(n)},
                         std::vector<double>{0.0, 1.0, 0.0});
  for (int i = 1; i < n; ++i) {
    densities.emplace_back(std::vector<double>{0.0, double(n)},
                           std::vector<double>{1.0});
  }
  Profile profile(Interval(0.0, double(n)), std::move(densities));
  PiecewiseDensity misreport(std::vector<double>{0.0, 1.0, double(n)},
                             std::vector<double>{1.0, 0.0});
  return {std::move(profile), std::move(misreport)};
}

std::pair<Profile, PiecewiseDensity> gen_ef2_lb() {
  std::vector<PiecewiseDensity> densities;
  densities.emplace_back(std::vector<double>{0.0, 0.5, 1.0},
                         std::vector<double>{1.0, 0.0});
  densities.emplace_back(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0});
  Profile profile(Interval(0.0, 1.0), std::move(densities));
  PiecewiseDensity misreport(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0});
  return {std::move(profile), std::move(misreport)};
}

Profile gen_interp_lb(int n, int k, int which) {
  if (n < 2 || k < 1) throw DomainError("interp-lb needs n >= 2 and k >= 1");
  if (which < 1 || which > n + 1) {
    throw DomainError("interp-lb instance index must lie in 1..n+1");
  }
  const int items = (k + 1) * n;
  std::vector<double> bp(items + 1);
  for (int t = 0; t <= items; ++t) bp[t] = double(t);

  const double premium = double(k) * n + 1.0;
  std::vector<PiecewiseDensity> densities;
  densities.reserve(n);
  for (int agent = 1; agent <= n; ++agent) {
    std::vector<double> values(items, 1.0);
    if (which == n + 1) {
      values[agent - 1] = premium;
    } else if (agent != which) {
      values[agent - 1] = premium;
    }
    densities.emplace_back(bp, std::move(values));
  }
  return Profile(Interval(0.0, double(items)), std::move(densities));
}

}  // namespace cake
