#pragma once

#include <cstddef>
#include <vector>

#include "cakemech/allocation.hpp"
#include "cakemech/density.hpp"

namespace cake {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::size_t kSolverIterationCap = 1'000'000;

/// Result of checking the MNW first-order condition on an allocation:
/// for every owned (agent, cell) pair, f_i(X_t)/v_i must dominate every
/// other agent's ratio on that cell.
struct ConditionReport {
  bool satisfied = true;
  double worst_violation = 0.0;  // max over checks of f_j/v_j - f_i/v_i
  int owner = -1;                // agent i of the worst pair
  int rival = -1;                // agent j of the worst pair
  int cell = -1;
};

struct MnwSolution {
  ShareMatrix shares;
  std::vector<double> utilities;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
};

/// Maximizes the Nash product over share matrices via proportional-response
/// dynamics on the equivalent equal-budget Fisher market, with an exact
/// support polish so check_mnw_condition passes at `tol`. Deterministic for
/// a given profile. When `complete`, cells valued by nobody go to agent 0.
/// Throws SolverError (carrying the residual) on non-convergence.
MnwSolution solve_mnw(const Profile& profile, bool complete, double tol = kDefaultTol);

ConditionReport check_mnw_condition(const Profile& profile, const ShareMatrix& shares,
                                    double tol);

/// Same check, but ownership is only tested against agents 2..n (paper
/// indexing): agent 1's claims on cells it does not own are not enforced.
ConditionReport check_weak_mnw(const Profile& profile, const ShareMatrix& shares,
                               double tol);

/// True iff f_agent(X_cell)/v_agent >= f_j(X_cell)/v_j - tol for every j.
bool deserves(const Profile& profile, const MnwSolution& solution, int agent,
              int cell, double tol = kDefaultTol);

}  // namespace cake
