#pragma once

// Test-only oracles, all independent of the solver paths they check:
// exhaustive subset scans, lattice closures, expectation sums over
// inclusion patterns, a recursive matching enumerator, and a
// vertex-enumeration LP solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dispatchkit/rng.hpp"
#include "dispatchkit/valuation.hpp"

namespace dispatchkit::testing {

inline DriverView random_view(SplitMix64& rng, int n) {
  DriverView view;
  for (int j = 0; j < n; ++j) view.push(rng.next_unit(), rng.next_unit(), j);
  return view;
}

// value(mask) for every subset of the view, by direct evaluation.
inline std::vector<double> all_subset_values(const DriverView& view, ValuationKind kind) {
  const int n = static_cast<int>(view.size());
  std::vector<double> vals(std::size_t{1} << n);
  std::vector<int> positions;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    positions.clear();
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1u) positions.push_back(j);
    vals[mask] = value(view.subset(positions), kind);
  }
  return vals;
}

// Downward monotone closure over the subset lattice.
inline std::vector<double> lattice_closure(std::vector<double> vals, int n) {
  for (std::uint32_t mask = 1; mask < vals.size(); ++mask)
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1u) vals[mask] = std::max(vals[mask], vals[mask & ~(1u << j)]);
  return vals;
}

// E_{S ~ independent(x)}[vals(S)] summed over all inclusion patterns.
inline double expectation_over_inclusions(const std::vector<double>& vals, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  double expect = 0.0;
  for (std::uint32_t mask = 0; mask < vals.size(); ++mask) {
    double prob = 1.0;
    for (int j = 0; j < n; ++j) prob *= (mask >> j & 1u) ? x[j] : 1.0 - x[j];
    expect += prob * vals[mask];
  }
  return expect;
}

// Best net value(S) - sum(prices over S) by exhaustive scan.
struct ExhaustiveDemand {
  double net = 0.0;
  std::uint32_t mask = 0;
};
inline ExhaustiveDemand exhaustive_demand(const DriverView& view, ValuationKind kind,
                                          const std::vector<double>& prices) {
  const auto vals = all_subset_values(view, kind);
  ExhaustiveDemand best;
  for (std::uint32_t mask = 0; mask < vals.size(); ++mask) {
    double cost = 0.0;
    for (std::size_t j = 0; j < view.size(); ++j)
      if (mask >> j & 1u) cost += prices[j];
    if (vals[mask] - cost > best.net) best = {vals[mask] - cost, mask};
  }
  return best;
}

// Best budget-feasible MNL value by exhaustive scan.
inline double exhaustive_budgeted_mnl(const DriverView& view, const std::vector<double>& costs, double budget) {
  const auto vals = all_subset_values(view, ValuationKind::kMnl);
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < vals.size(); ++mask) {
    double cost = 0.0;
    for (std::size_t j = 0; j < view.size(); ++j)
      if (mask >> j & 1u) cost += costs[j];
    if (cost <= budget + 1e-12) best = std::max(best, vals[mask]);
  }
  return best;
}

// Exhaustive maximum-weight matching: every injective row -> column map,
// rows may stay unmatched.
inline double exhaustive_matching(const std::vector<std::vector<double>>& w) {
  const int r = static_cast<int>(w.size());
  const int c = r == 0 ? 0 : static_cast<int>(w[0].size());
  std::vector<bool> used(c, false);
  double best = 0.0;
  auto rec = [&](auto&& self, int row, double acc) -> void {
    if (row == r) {
      best = std::max(best, acc);
      return;
    }
    self(self, row + 1, acc);
    for (int j = 0; j < c; ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, row + 1, acc + w[row][j]);
      used[j] = false;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

// Exhaustive welfare maximization over driver -> {unused, rider} maps.
inline double exhaustive_welfare(const Instance& inst, ValuationKind kind) {
  std::vector<int> map(inst.n, -1);
  double best = 0.0;
  auto rec = [&](auto&& self, int j) -> void {
    if (j == inst.n) {
      double total = 0.0;
      for (int i = 0; i < inst.m; ++i) {
        std::vector<int> set;
        for (int d = 0; d < inst.n; ++d)
          if (map[d] == i) set.push_back(d);
        total += value(DriverView::row_subset(inst, i, set), kind);
      }
      best = std::max(best, total);
      return;
    }
    for (int i = -1; i < inst.m; ++i) {
      map[j] = i;
      self(self, j + 1);
    }
    map[j] = -1;
  };
  rec(rec, 0);
  return best;
}

// Generic vertex-enumeration LP oracle for tiny problems:
//   optimize c.x over {rows a.x <= / == rhs} and x >= 0.
// Every n-subset of constraints (rows plus nonnegativity) is solved as an
// equality system; feasible solutions are scored. Exponential; tests only.
struct VertexLp {
  int num_vars = 0;
  std::vector<double> objective;
  struct Con {
    std::vector<double> coeffs;
    double rhs = 0.0;
    bool eq = false;
  };
  std::vector<Con> cons;  // nonnegativity added automatically
};

inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>* x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-10) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  x->assign(n, 0.0);
  for (int r = 0; r < n; ++r) (*x)[r] = b[r] / a[r][r];
  return true;
}

struct VertexOpt {
  bool feasible = false;
  double objective = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
};

inline VertexOpt vertex_enumerate_max(const VertexLp& lp) {
  const int n = lp.num_vars;
  std::vector<VertexLp::Con> all = lp.cons;
  for (int j = 0; j < n; ++j) {
    VertexLp::Con c;
    c.coeffs.assign(n, 0.0);
    c.coeffs[j] = 1.0;  // x_j >= 0 active as x_j == 0
    c.rhs = 0.0;
    all.push_back(c);
  }
  const int total = static_cast<int>(all.size());
  VertexOpt best;
  std::vector<int> pick(n);
  auto feasible = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < -1e-7) return false;
    for (const auto& con : lp.cons) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += con.coeffs[j] * x[j];
      if (con.eq ? std::abs(lhs - con.rhs) > 1e-7 : lhs > con.rhs + 1e-7) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int from, int depth) -> void {
    if (depth == n) {
      std::vector<std::vector<double>> a(n);
      std::vector<double> b(n);
      for (int r = 0; r < n; ++r) {
        a[r] = all[pick[r]].coeffs;
        b[r] = all[pick[r]].rhs;
      }
      std::vector<double> x;
      if (!solve_square(std::move(a), std::move(b), &x)) return;
      if (!feasible(x)) return;
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
      if (!best.feasible || obj > best.objective) {
        best.feasible = true;
        best.objective = obj;
        best.x = x;
      }
      return;
    }
    for (int c = from; c < total; ++c) {
      pick[depth] = c;
      self(self, c + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace dispatchkit::testing
