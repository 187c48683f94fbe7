#pragma once

// Shared column-generation driver for the MNL and best-accept configuration
// LPs. Master rows: one <=1 row per driver, then one ==1 row per rider.
// Not installed; implementation detail of fa_multi.cpp and ba_multi.cpp.

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dispatchkit/lp.hpp"

namespace dispatchkit::internal {

struct CgProblem {
  int riders = 0;
  int drivers = 0;
  // Exact value of a column for a rider.
  std::function<double(int rider, const std::vector<int>& set)> column_value;
  // Given driver prices, returns an approximate demand set and its net
  // value (column_value - prices), within oracle_slack of the maximum.
  std::function<std::pair<std::vector<int>, double>(int rider, const std::vector<double>& alpha)> price;
  std::vector<std::vector<std::vector<int>>> warm_start;  // per rider
  double violation_threshold = 0.0;
  double oracle_slack = 0.0;
  int max_iterations = 200;
};

struct CgResult {
  std::vector<std::vector<std::pair<std::vector<int>, double>>> columns;  // per rider: (set, weight)
  std::vector<double> alpha;  // driver duals, clipped to >= 0
  std::vector<double> beta;   // rider duals
  double objective = 0.0;
  double upper_bound = 0.0;  // sum(alpha) + sum_i max(beta_i, net_i + slack)
  bool certified = false;
  int iterations = 0;
  std::vector<double> objective_history;
};

inline CgResult run_column_generation(const CgProblem& prob) {
  const int m = prob.riders;
  const int n = prob.drivers;

  struct Column {
    int rider;
    std::vector<int> set;
    double value;
  };
  std::vector<Column> cols;
  std::vector<std::set<std::vector<int>>> seen(m);
  auto add_column = [&](int rider, std::vector<int> set) {
    std::sort(set.begin(), set.end());
    if (!seen[rider].insert(set).second) return false;
    cols.push_back({rider, set, prob.column_value(rider, set)});
    return true;
  };
  for (int i = 0; i < m; ++i) {
    add_column(i, {});
    if (!prob.warm_start.empty())
      for (const auto& s : prob.warm_start[i]) add_column(i, s);
  }

  CgResult out;
  auto solve_master = [&]() -> LpSolution {
    LinearProgram lp;
    lp.num_vars = static_cast<int>(cols.size());
    lp.objective.resize(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) lp.objective[k] = cols[k].value;
    for (int j = 0; j < n; ++j) {
      std::vector<double> row(cols.size(), 0.0);
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (std::binary_search(cols[k].set.begin(), cols[k].set.end(), j)) row[k] = 1.0;
      lp.add_row(std::move(row), RowSense::kLe, 1.0);
    }
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(cols.size(), 0.0);
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (cols[k].rider == i) row[k] = 1.0;
      lp.add_row(std::move(row), RowSense::kEq, 1.0);
    }
    LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::kOptimal)
      throw std::runtime_error("configuration LP master did not solve to optimality");
    out.objective = sol.objective;
    out.objective_history.push_back(sol.objective);
    return sol;
  };

  LpSolution sol = solve_master();
  bool stale = false;  // columns added since the last master solve
  for (int iter = 1; iter <= prob.max_iterations; ++iter) {
    out.iterations = iter;
    std::vector<double> alpha(n, 0.0), beta(m, 0.0);
    for (int j = 0; j < n; ++j) alpha[j] = std::max(0.0, sol.duals[j]);
    for (int i = 0; i < m; ++i) beta[i] = sol.duals[n + i];

    bool any_new = false;
    double worst_violation = 0.0;
    double ub = 0.0;
    for (int j = 0; j < n; ++j) ub += alpha[j];
    for (int i = 0; i < m; ++i) {
      auto [set, net] = prob.price(i, alpha);
      ub += std::max(beta[i], net + prob.oracle_slack);
      worst_violation = std::max(worst_violation, net - beta[i]);
      if (net - beta[i] > prob.violation_threshold) any_new |= add_column(i, std::move(set));
    }
    out.alpha = std::move(alpha);
    out.beta = std::move(beta);
    out.upper_bound = ub;

    if (worst_violation <= prob.violation_threshold) {
      out.certified = true;
      break;
    }
    if (!any_new) break;  // violating column already present: numerical stall
    stale = true;
    if (iter == prob.max_iterations) break;
    sol = solve_master();
    stale = false;
  }
  if (stale) sol = solve_master();

  out.columns.assign(m, {});
  for (std::size_t k = 0; k < cols.size(); ++k)
    if (sol.primal[k] > 1e-12) out.columns[cols[k].rider].push_back({cols[k].set, sol.primal[k]});
  return out;
}

}  // namespace dispatchkit::internal
