#include "cakemech/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cakemech/errors.hpp"
#include "cakemech/kernels.hpp"

namespace cake {

namespace {

// Compact equal-budget Fisher market over the cells someone values.
struct Market {
  int n = 0;
  int m = 0;                    // active cells only
  std::vector<double> a;        // n x m whole-cell values f_i(X_t)*|X_t|
  std::vector<int> cell_of;     // active index -> profile cell index
  std::vector<bool> active;     // per profile cell

  const double* row(const std::vector<double>& grid, int i) const {
    return grid.data() + static_cast<std::size_t>(i) * m;
  }
  double* row(std::vector<double>& grid, int i) const {
    return grid.data() + static_cast<std::size_t>(i) * m;
  }
};

Market build_market(const Profile& profile) {
  Market market;
  market.n = profile.agent_count();
  market.active.assign(profile.cell_count(), false);
  for (int t = 0; t < profile.cell_count(); ++t) {
    for (int i = 0; i < market.n; ++i) {
      if (profile.density_value(i, t) > 0.0) {
        market.active[t] = true;
        break;
      }
    }
    if (market.active[t]) market.cell_of.push_back(t);
  }
  market.m = static_cast<int>(market.cell_of.size());
  market.a.assign(static_cast<std::size_t>(market.n) * market.m, 0.0);
  for (int i = 0; i < market.n; ++i) {
    for (int t = 0; t < market.m; ++t) {
      market.row(market.a, i)[t] = profile.cell_value(i, market.cell_of[t]);
    }
  }
  return market;
}

ShareMatrix shares_from_fractions(const Profile& profile, const Market& market,
                                  const std::vector<double>& x, bool complete) {
  ShareMatrix shares(profile.cells(), profile.agent_count());
  for (int i = 0; i < market.n; ++i) {
    for (int t = 0; t < market.m; ++t) {
      const int cell = market.cell_of[t];
      shares.at(i, cell) = x[static_cast<std::size_t>(i) * market.m + t] *
                           profile.cell_length(cell);
    }
  }
  if (complete) {
    // Nobody values these cells; the characterization condition holds
    // vacuously wherever they land, and no utility is affected.
    for (int cell = 0; cell < profile.cell_count(); ++cell) {
      if (!market.active[cell]) shares.at(0, cell) = profile.cell_length(cell);
    }
  }
  return shares;
}

std::vector<double> utilities_from_shares(const Profile& profile,
                                          const ShareMatrix& shares) {
  std::vector<double> u(profile.agent_count(), 0.0);
  for (int i = 0; i < profile.agent_count(); ++i) {
    double sum = 0.0;
    for (int t = 0; t < profile.cell_count(); ++t) {
      sum += profile.density_value(i, t) * shares.at(i, t);
    }
    u[i] = sum;
  }
  return u;
}

ConditionReport condition_report(const Profile& profile, const ShareMatrix& shares,
                                 double tol, bool weak) {
  if (shares.cell_count() != profile.cell_count() ||
      shares.agent_count() != profile.agent_count()) {
    throw DomainError("share matrix does not match the profile");
  }
  const std::vector<double> u = utilities_from_shares(profile, shares);
  for (int i = 0; i < profile.agent_count(); ++i) {
    if (!(u[i] > 0.0)) {
      throw DomainError("agent " + std::to_string(i + 1) +
                        " has nonpositive utility; ratios are undefined");
    }
  }

  ConditionReport report;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < profile.cell_count(); ++t) {
    const double own_threshold = tol * profile.cell_length(t);
    for (int i = 0; i < profile.agent_count(); ++i) {
      if (shares.at(i, t) <= own_threshold) continue;
      const double owner_ratio = profile.density_value(i, t) / u[i];
      for (int j = weak ? 1 : 0; j < profile.agent_count(); ++j) {
        const double violation = profile.density_value(j, t) / u[j] - owner_ratio;
        if (violation > report.worst_violation) {
          report.worst_violation = violation;
          report.owner = i;
          report.rival = j;
          report.cell = t;
        }
      }
    }
  }
  if (report.owner < 0) report.worst_violation = 0.0;
  report.satisfied = report.worst_violation <= tol;
  return report;
}

// Exact equilibrium extraction from a support guess. Prices and utilities
// come from the tie structure itself (log-space traversal per component,
// then per-component money conservation); the money flow is a lexicographic
// greedy with augmenting-path repair. Returns the cell fractions, or nothing
// if the guess is inconsistent or infeasible.
struct PolishResult {
  std::vector<double> x;  // n x m fractions of each active cell
  std::vector<double> beta;
};

std::optional<PolishResult> try_polish(const Market& market,
                                       const std::vector<double>& prices,
                                       double theta) {
  const int n = market.n;
  const int m = market.m;
  std::vector<double> beta(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* a = market.row(market.a, i);
    for (int t = 0; t < m; ++t) {
      if (a[t] > 0.0) beta[i] = std::max(beta[i], a[t] / prices[t]);
    }
    if (!(beta[i] > 0.0)) return std::nullopt;
  }

  std::vector<char> edge(static_cast<std::size_t>(n) * m, 0);
  auto has_edge = [&](int i, int t) -> char& {
    return edge[static_cast<std::size_t>(i) * m + t];
  };
  for (int i = 0; i < n; ++i) {
    const double* a = market.row(market.a, i);
    for (int t = 0; t < m; ++t) {
      if (a[t] > 0.0 && a[t] / prices[t] >= beta[i] * (1.0 - theta)) {
        has_edge(i, t) = 1;
      }
    }
  }
  // Every active cell must have a buyer; attach its relatively-best agent.
  for (int t = 0; t < m; ++t) {
    int best = -1;
    double best_rel = -1.0;
    for (int i = 0; i < n; ++i) {
      const double a = market.row(market.a, i)[t];
      if (a <= 0.0) continue;
      const double rel = (a / prices[t]) / beta[i];
      if (rel > best_rel) {
        best_rel = rel;
        best = i;
      }
    }
    if (best < 0) return std::nullopt;
    has_edge(best, t) = 1;
  }

  // Resolve log-prices and log-utilities per connected component.
  constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  constexpr double kLogConsistencyTol = 1e-9;
  std::vector<double> lbeta(n, kUnset);
  std::vector<double> lprice(m, kUnset);
  std::vector<int> agent_component(n, -1);
  std::vector<int> cell_component(m, -1);
  int components = 0;

  for (int root = 0; root < n; ++root) {
    if (agent_component[root] >= 0) continue;
    const int comp = components++;
    lbeta[root] = 0.0;
    agent_component[root] = comp;
    std::deque<int> queue{root};  // agents: [0,n), cells: n + t
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      if (node < n) {
        const int i = node;
        const double* a = market.row(market.a, i);
        for (int t = 0; t < m; ++t) {
          if (!has_edge(i, t)) continue;
          const double expected = std::log(a[t]) - lbeta[i];
          if (cell_component[t] < 0) {
            cell_component[t] = comp;
            lprice[t] = expected;
            queue.push_back(n + t);
          } else if (std::abs(lprice[t] - expected) >
                     kLogConsistencyTol * (1.0 + std::abs(lprice[t]))) {
            return std::nullopt;
          }
        }
      } else {
        const int t = node - n;
        for (int j = 0; j < n; ++j) {
          if (!has_edge(j, t)) continue;
          const double expected = std::log(market.row(market.a, j)[t]) - lprice[t];
          if (agent_component[j] < 0) {
            agent_component[j] = comp;
            lbeta[j] = expected;
            queue.push_back(j);
          } else if (std::abs(lbeta[j] - expected) >
                     kLogConsistencyTol * (1.0 + std::abs(lbeta[j]))) {
            return std::nullopt;
          }
        }
      }
    }
  }
  for (int t = 0; t < m; ++t) {
    if (cell_component[t] < 0) return std::nullopt;
  }

  // Money conservation fixes the scale of each component.
  std::vector<double> comp_budget(components, 0.0);
  std::vector<double> comp_price_sum(components, 0.0);
  for (int i = 0; i < n; ++i) comp_budget[agent_component[i]] += 1.0;
  std::vector<double> price(m, 0.0);
  for (int t = 0; t < m; ++t) price[t] = std::exp(lprice[t]);
  for (int t = 0; t < m; ++t) comp_price_sum[cell_component[t]] += price[t];
  std::vector<double> comp_scale(components, 1.0);
  for (int c = 0; c < components; ++c) {
    if (!(comp_price_sum[c] > 0.0)) return std::nullopt;
    comp_scale[c] = comp_budget[c] / comp_price_sum[c];
  }
  for (int t = 0; t < m; ++t) price[t] *= comp_scale[cell_component[t]];

  PolishResult result;
  result.beta.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    result.beta[i] = std::exp(lbeta[i]) / comp_scale[agent_component[i]];
  }

  // Transportation flow: budgets 1 per agent, capacities price[t] per cell,
  // supported on the guessed edges. Lexicographic greedy preload (low agent,
  // low cell first), then shortest augmenting paths for any leftovers.
  constexpr double kFlowEps = 1e-10;
  std::vector<double> money(static_cast<std::size_t>(n) * m, 0.0);
  auto money_at = [&](int i, int t) -> double& {
    return money[static_cast<std::size_t>(i) * m + t];
  };
  std::vector<double> leftover(n, 1.0);
  std::vector<double> capacity = price;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < m && leftover[i] > 0.0; ++t) {
      if (!has_edge(i, t) || capacity[t] <= 0.0) continue;
      const double take = std::min(leftover[i], capacity[t]);
      money_at(i, t) = take;
      leftover[i] -= take;
      capacity[t] -= take;
    }
  }

  std::size_t safety = static_cast<std::size_t>(n + m + 4) *
                       static_cast<std::size_t>(n) * static_cast<std::size_t>(m + 4);
  for (int source = 0; source < n; ++source) {
    while (leftover[source] > kFlowEps) {
      if (safety-- == 0) return std::nullopt;
      // BFS over the residual graph: forward on support edges, backward on
      // edges carrying money; stop at any cell with spare capacity.
      std::vector<int> prev_agent_of_cell(m, -2);
      std::vector<int> prev_cell_of_agent(n, -2);
      prev_cell_of_agent[source] = -1;
      std::deque<int> queue{source};
      int sink = -1;
      while (!queue.empty() && sink < 0) {
        const int node = queue.front();
        queue.pop_front();
        if (node < n) {
          for (int t = 0; t < m; ++t) {
            if (!has_edge(node, t) || prev_agent_of_cell[t] != -2) continue;
            prev_agent_of_cell[t] = node;
            if (capacity[t] > kFlowEps) {
              sink = t;
              break;
            }
            queue.push_back(n + t);
          }
        } else {
          const int t = node - n;
          for (int j = 0; j < n; ++j) {
            if (prev_cell_of_agent[j] != -2 || money_at(j, t) <= kFlowEps) continue;
            prev_cell_of_agent[j] = t;
            queue.push_back(j);
          }
        }
      }
      if (sink < 0) return std::nullopt;

      double push = std::min(leftover[source], capacity[sink]);
      for (int t = sink;;) {
        const int i = prev_agent_of_cell[t];
        if (i == source) break;
        const int back = prev_cell_of_agent[i];
        push = std::min(push, money_at(i, back));
        t = back;
      }
      for (int t = sink;;) {
        const int i = prev_agent_of_cell[t];
        money_at(i, t) += push;
        if (i == source) break;
        const int back = prev_cell_of_agent[i];
        money_at(i, back) -= push;
        t = back;
      }
      capacity[sink] -= push;
      leftover[source] -= push;
    }
  }

  result.x.assign(static_cast<std::size_t>(n) * m, 0.0);
  for (int t = 0; t < m; ++t) {
    double sold = 0.0;
    for (int i = 0; i < n; ++i) sold += money_at(i, t);
    if (!(sold > 0.0)) return std::nullopt;
    for (int i = 0; i < n; ++i) {
      result.x[static_cast<std::size_t>(i) * m + t] = money_at(i, t) / sold;
    }
  }
  return result;
}

MnwSolution finish(const Profile& profile, const Market& market,
                   const std::vector<double>& x, bool complete, double tol,
                   std::size_t iterations) {
  ShareMatrix shares = shares_from_fractions(profile, market, x, complete);
  ConditionReport report = condition_report(profile, shares, tol, /*weak=*/false);
  if (!report.satisfied) {
    throw SolverError("solver did not reach the requested tolerance; residual " +
                          std::to_string(report.worst_violation),
                      report.worst_violation);
  }
  std::vector<double> u = utilities_from_shares(profile, shares);
  return MnwSolution{std::move(shares), std::move(u),
                     std::max(0.0, report.worst_violation), iterations};
}

}  // namespace

MnwSolution solve_mnw(const Profile& profile, bool complete, double tol) {
  if (!(tol > 0.0)) throw DomainError("solver tolerance must be positive");
  const Market market = build_market(profile);
  const int n = market.n;
  const int m = market.m;

  if (n == 1) {
    std::vector<double> x(static_cast<std::size_t>(m), 1.0);
    return finish(profile, market, x, complete, tol, 0);
  }

  const kernels::Ops& ops = kernels::active_ops();
  std::vector<double> bids(static_cast<std::size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* a = market.row(market.a, i);
    double total = 0.0;
    for (int t = 0; t < m; ++t) total += a[t];
    double* b = market.row(bids, i);
    for (int t = 0; t < m; ++t) b[t] = a[t] / total;
  }

  std::vector<double> prices(m, 0.0);
  std::vector<double> welfare(n, 0.0);
  std::size_t next_polish = 8;
  const double thetas[] = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};

  for (std::size_t iter = 1; iter <= kSolverIterationCap; ++iter) {
    std::fill(prices.begin(), prices.end(), 0.0);
    for (int i = 0; i < n; ++i) ops.add(prices.data(), market.row(bids, i), m);
    for (int i = 0; i < n; ++i) {
      welfare[i] = ops.dot_over(market.row(market.a, i), market.row(bids, i),
                                prices.data(), m);
    }
    for (int i = 0; i < n; ++i) {
      double* b = market.row(bids, i);
      ops.bid_update(b, market.row(market.a, i), b, prices.data(),
                     1.0 / welfare[i], m);
    }

    if (iter >= next_polish) {
      next_polish *= 2;
      std::fill(prices.begin(), prices.end(), 0.0);
      for (int i = 0; i < n; ++i) ops.add(prices.data(), market.row(bids, i), m);
      for (double theta : thetas) {
        std::optional<PolishResult> polished = try_polish(market, prices, theta);
        if (!polished) continue;
        ShareMatrix shares =
            shares_from_fractions(profile, market, polished->x, complete);
        ConditionReport report =
            condition_report(profile, shares, tol, /*weak=*/false);
        if (!report.satisfied) continue;
        std::vector<double> u = utilities_from_shares(profile, shares);
        return MnwSolution{std::move(shares), std::move(u),
                           std::max(0.0, report.worst_violation), iter};
      }
    }
  }

  // Last resort: report the raw proportional-response state.
  std::fill(prices.begin(), prices.end(), 0.0);
  for (int i = 0; i < n; ++i) ops.add(prices.data(), market.row(bids, i), m);
  std::vector<double> x(static_cast<std::size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < m; ++t) {
      x[static_cast<std::size_t>(i) * m + t] =
          market.row(bids, i)[t] / prices[t];
    }
  }
  return finish(profile, market, x, complete, tol, kSolverIterationCap);
}

ConditionReport check_mnw_condition(const Profile& profile, const ShareMatrix& shares,
                                    double tol) {
  return condition_report(profile, shares, tol, /*weak=*/false);
}

ConditionReport check_weak_mnw(const Profile& profile, const ShareMatrix& shares,
                               double tol) {
  return condition_report(profile, shares, tol, /*weak=*/true);
}

bool deserves(const Profile& profile, const MnwSolution& solution, int agent,
              int cell, double tol) {
  if (agent < 0 || agent >= profile.agent_count() || cell < 0 ||
      cell >= profile.cell_count()) {
    throw DomainError("deserves: agent or cell index out of range");
  }
  const double own = profile.density_value(agent, cell) / solution.utilities[agent];
  for (int j = 0; j < profile.agent_count(); ++j) {
    if (profile.density_value(j, cell) / solution.utilities[j] - own > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace cake
