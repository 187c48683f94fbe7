#include "dispatchkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dispatchkit/matching.hpp"
#include "dispatchkit/rng.hpp"

namespace dispatchkit {

SolveResult ed_solve(const Instance& inst, const EdConfig& cfg) {
  require_valid(inst);
  std::vector<std::vector<double>> edges(inst.m, std::vector<double>(inst.n));
  for (int i = 0; i < inst.m; ++i)
    for (int j = 0; j < inst.n; ++j)
      edges[i][j] = cfg.edge_weight == EdConfig::EdgeWeight::kRawWeight
                        ? inst.weight(i, j)
                        : inst.prob(i, j) * inst.weight(i, j);
  MatchingResult matched = max_weight_matching(edges);
  SolveResult out;
  out.assignment.sets.assign(inst.m, {});
  for (int i = 0; i < inst.m; ++i) {
    const int j = matched.match[i];
    if (j < 0) continue;
    out.assignment.sets[i].push_back(j);
    out.welfare += inst.prob(i, j) * inst.weight(i, j);
  }
  return out;
}

SolveResult greedy_in_order(const Instance& inst, std::span<const int> driver_order, ValuationKind kind) {
  SolveResult out;
  out.assignment.sets.assign(inst.m, {});
  std::vector<double> current(inst.m, 0.0);
  for (int j : driver_order) {
    int best_i = -1;
    double best_val = 0.0, best_marginal = 0.0;
    for (int i = 0; i < inst.m; ++i) {
      auto with = out.assignment.sets[i];
      with.push_back(j);
      const double val = value(DriverView::row_subset(inst, i, with), kind);
      const double marginal = val - current[i];
      if (marginal > best_marginal) {
        best_marginal = marginal;
        best_val = val;
        best_i = i;
      }
    }
    if (best_i >= 0) {
      out.assignment.sets[best_i].push_back(j);
      current[best_i] = best_val;
    }
  }
  for (auto& set : out.assignment.sets) std::sort(set.begin(), set.end());
  out.welfare = 0.0;
  for (double v : current) out.welfare += v;
  return out;
}

SolveResult fa_greedy(const Instance& inst, std::uint64_t seed) {
  require_valid(inst);
  std::vector<int> order(inst.n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  rng.shuffle(order);
  return greedy_in_order(inst, order, ValuationKind::kFirstAccept);
}

namespace {

struct BruteState {
  const Instance* inst;
  ValuationKind kind;
  std::vector<int> map;  // per driver: rider or -1
  std::vector<FaAccumulator> fa;
  std::vector<std::vector<std::pair<double, double>>> sorted;  // BA: (w, p) by w desc
  std::vector<double> val;  // per-rider value, kept current
  double best = -1.0;
  std::vector<int> best_map;

  static double ba_of_sorted(const std::vector<std::pair<double, double>>& wp) {
    double v = 0.0, none_above = 1.0;
    for (const auto& [w, p] : wp) {
      v += w * p * none_above;
      none_above *= 1.0 - p;
    }
    return v;
  }

  void rec(int j) {
    if (j == inst->n) {
      double welfare = 0.0;
      for (double v : val) welfare += v;
      if (welfare > best) {
        best = welfare;
        best_map = map;
      }
      return;
    }
    map[j] = -1;
    rec(j + 1);
    for (int i = 0; i < inst->m; ++i) {
      map[j] = i;
      const double w = inst->weight(i, j);
      const double p = inst->prob(i, j);
      const double saved_val = val[i];
      if (kind == ValuationKind::kFirstAccept) {
        FaAccumulator saved = fa[i];
        fa[i].add(w, p);
        val[i] = fa[i].value();
        rec(j + 1);
        fa[i] = std::move(saved);
      } else {
        auto& wp = sorted[i];
        auto it = std::upper_bound(wp.begin(), wp.end(), w,
                                   [](double lhs, const auto& rhs) { return lhs > rhs.first; });
        const auto pos = it - wp.begin();
        wp.insert(it, {w, p});
        val[i] = ba_of_sorted(wp);
        rec(j + 1);
        wp.erase(wp.begin() + pos);
      }
      val[i] = saved_val;
    }
    map[j] = -1;
  }
};

}  // namespace

SolveResult opt_bruteforce(const Instance& inst, ValuationKind kind, const OracleBudget& budget) {
  require_valid(inst);
  if (kind == ValuationKind::kMnl) throw std::invalid_argument("opt_bruteforce: kind must be fa or ba");
  const double states = std::pow(static_cast<double>(inst.m + 1), inst.n);
  if (states > budget.max_states)
    throw std::invalid_argument("opt_bruteforce: (m+1)^n = " + std::to_string(states) +
                                " states exceeds budget " + std::to_string(budget.max_states) +
                                "; raise the budget to at least that many states");

  BruteState st;
  st.inst = &inst;
  st.kind = kind;
  st.map.assign(inst.n, -1);
  st.fa.assign(inst.m, FaAccumulator{});
  st.sorted.assign(inst.m, {});
  st.val.assign(inst.m, 0.0);
  st.rec(0);

  SolveResult out;
  out.assignment.sets.assign(inst.m, {});
  for (int j = 0; j < inst.n; ++j)
    if (st.best_map[j] >= 0) out.assignment.sets[st.best_map[j]].push_back(j);
  out.welfare = st.best;
  return out;
}

}  // namespace dispatchkit
