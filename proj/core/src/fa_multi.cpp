#include "dispatchkit/fa_multi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "config_lp_internal.hpp"
#include "dispatchkit/rng.hpp"

namespace dispatchkit {

MnlPrefixOpt mnl_best_subset(const DriverView& view) {
  const int n = static_cast<int>(view.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (view.weights[a] != view.weights[b]) return view.weights[a] > view.weights[b];
    return view.ids[a] < view.ids[b];
  });
  MnlPrefixOpt best;  // empty prefix has value 0
  double num = 0.0, den = 1.0;
  std::vector<int> prefix;
  for (int pos : order) {
    num += view.weights[pos] * view.probs[pos];
    den += view.probs[pos];
    prefix.push_back(view.ids[pos]);
    if (num / den > best.value) {
      best.value = num / den;
      best.set = prefix;
    }
  }
  std::sort(best.set.begin(), best.set.end());
  return best;
}

namespace {

// max sum(profit) s.t. sum(cost) <= budget over 0/1 picks. Exact subset
// enumeration when small; otherwise the classic profit-grid knapsack
// approximation with relative loss <= eps_inner.
std::vector<int> budgeted_max_profit(const std::vector<double>& profit, const std::vector<double>& cost,
                                     double budget, double eps_inner) {
  const int k = static_cast<int>(profit.size());
  if (k == 0) return {};
  if (k <= 15) {
    std::vector<double> mask_profit(1u << k, 0.0), mask_cost(1u << k, 0.0);
    std::uint32_t best_mask = 0;
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      const int low = std::countr_zero(mask);
      mask_profit[mask] = mask_profit[mask & (mask - 1)] + profit[low];
      mask_cost[mask] = mask_cost[mask & (mask - 1)] + cost[low];
      if (mask_cost[mask] <= budget && mask_profit[mask] > best) {
        best = mask_profit[mask];
        best_mask = mask;
      }
    }
    std::vector<int> chosen;
    for (int j = 0; j < k; ++j)
      if (best_mask >> j & 1u) chosen.push_back(j);
    return chosen;
  }

  // Profit-grid dynamic program: min cost per rounded-profit level.
  double p_max = 0.0;
  for (double p : profit) p_max = std::max(p_max, p);
  const double kappa = eps_inner * p_max / static_cast<double>(k);
  std::vector<long> q(k);
  long q_total = 0;
  for (int j = 0; j < k; ++j) {
    q[j] = static_cast<long>(std::floor(profit[j] / kappa));
    q_total += q[j];
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> min_cost(q_total + 1, inf);
  min_cost[0] = 0.0;
  std::vector<std::vector<bool>> take(k, std::vector<bool>(q_total + 1, false));
  long reachable = 0;
  for (int j = 0; j < k; ++j) {
    reachable += q[j];
    for (long level = reachable; level >= q[j]; --level) {
      const double with = min_cost[level - q[j]] + cost[j];
      if (with < min_cost[level]) {
        min_cost[level] = with;
        take[j][level] = true;
      }
    }
  }
  long best_level = 0;
  for (long level = q_total; level > 0; --level) {
    if (min_cost[level] <= budget) {
      best_level = level;
      break;
    }
  }
  std::vector<int> chosen;
  long level = best_level;
  for (int j = k - 1; j >= 0; --j) {
    if (take[j][level]) {
      chosen.push_back(j);
      level -= q[j];
    }
  }
  std::reverse(chosen.begin(), chosen.end());
  return chosen;
}

double mnl_of_positions(const DriverView& view, const std::vector<int>& positions) {
  double num = 0.0, den = 1.0;
  for (int pos : positions) {
    num += view.weights[pos] * view.probs[pos];
    den += view.probs[pos];
  }
  return num / den;
}

}  // namespace

std::vector<int> mnl_knapsack_fptas(const DriverView& view, std::span<const double> costs, double budget,
                                    double eps) {
  const int n = static_cast<int>(view.size());
  if (static_cast<int>(costs.size()) != n) throw std::invalid_argument("mnl_knapsack_fptas: costs size mismatch");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mnl_knapsack_fptas: eps must be in (0,1)");
  if (budget < 0.0) throw std::invalid_argument("mnl_knapsack_fptas: negative budget");
  for (double a : costs)
    if (a < 0.0) throw std::invalid_argument("mnl_knapsack_fptas: negative cost");

  std::vector<int> affordable;
  for (int j = 0; j < n; ++j)
    if (costs[j] <= budget) affordable.push_back(j);
  if (affordable.empty()) return {};

  // Best affordable singleton anchors the search: R1 <= OPT <= n * R1.
  int single = -1;
  double r1 = 0.0;
  for (int j : affordable) {
    const double v = view.weights[j] * view.probs[j] / (1.0 + view.probs[j]);
    if (v > r1) {
      r1 = v;
      single = j;
    }
  }
  if (single < 0) return {};  // every affordable driver is worthless

  std::vector<int> best_positions = {single};
  double best_value = r1;

  const double eps2 = 0.49 * eps;
  double lo = r1;
  double hi = static_cast<double>(n) * r1;
  const double prec = 0.49 * eps * r1;
  for (int iter = 0; iter < 64 && hi - lo > prec; ++iter) {
    const double lam = 0.5 * (lo + hi);
    // Inner knapsack over positive-profit items: profit_j = p_j (w_j - lam).
    std::vector<int> items;
    std::vector<double> profit, cost;
    std::vector<int> zero_cost;  // always worth taking
    for (int j : affordable) {
      const double pi = view.probs[j] * (view.weights[j] - lam);
      if (pi <= 0.0) continue;
      if (costs[j] == 0.0) {
        zero_cost.push_back(j);
      } else {
        items.push_back(j);
        profit.push_back(pi);
        cost.push_back(costs[j]);
      }
    }
    std::vector<int> chosen_local = budgeted_max_profit(profit, cost, budget, eps2);
    std::vector<int> chosen = zero_cost;
    for (int idx : chosen_local) chosen.push_back(items[idx]);
    double phi = 0.0;
    for (int j : chosen) phi += view.probs[j] * (view.weights[j] - lam);
    if (phi >= (1.0 - eps2) * lam) {
      lo = lam;
      const double v = mnl_of_positions(view, chosen);
      if (v > best_value) {
        best_value = v;
        best_positions = chosen;
      }
    } else {
      hi = lam;
    }
  }

  std::vector<int> ids;
  ids.reserve(best_positions.size());
  for (int pos : best_positions) ids.push_back(view.ids[pos]);
  std::sort(ids.begin(), ids.end());
  return ids;
}

DemandSet demand_oracle_mnl(const DriverView& view, std::span<const double> costs, double eps) {
  const int n = static_cast<int>(view.size());
  if (static_cast<int>(costs.size()) != n) throw std::invalid_argument("demand_oracle_mnl: costs size mismatch");
  std::vector<double> clipped(costs.begin(), costs.end());
  for (double& a : clipped) a = std::max(0.0, a);
  double cost_sum = 0.0;
  for (double a : clipped) cost_sum += a;

  std::vector<int> pos_of_id(n);
  for (int j = 0; j < n; ++j) pos_of_id[view.ids[j]] = j;
  auto net_of = [&](const std::vector<int>& ids) {
    double c = 0.0;
    std::vector<int> positions;
    positions.reserve(ids.size());
    for (int id : ids) {
      positions.push_back(pos_of_id[id]);
      c += clipped[pos_of_id[id]];
    }
    return mnl_of_positions(view, positions) - c;
  };

  DemandSet best;  // empty set, net 0
  const int r_max = static_cast<int>(std::ceil(2.0 / eps));
  for (int r = 0; r <= r_max; ++r) {
    const double budget = static_cast<double>(r) * eps / 2.0;
    std::vector<int> cand;
    if (budget >= cost_sum) {
      // Everything is affordable at once: the unconstrained optimum is a
      // revenue-ordered prefix, solved exactly.
      cand = mnl_best_subset(view).set;
    } else {
      cand = mnl_knapsack_fptas(view, clipped, budget, eps / 2.0);
    }
    const double net = net_of(cand);
    if (net > best.net) {
      best.net = net;
      best.set = std::move(cand);
    }
    if (budget >= cost_sum) break;
  }
  return best;
}

FractionalSolution solve_config_lp(const Instance& inst, const FaMultiConfig& cfg) {
  require_valid(inst);
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("solve_config_lp: eps must be positive");
  if (cfg.max_iterations < 1) throw std::invalid_argument("solve_config_lp: max_iterations must be >= 1");

  std::vector<DriverView> views;
  views.reserve(inst.m);
  for (int i = 0; i < inst.m; ++i) views.push_back(DriverView::row(inst, i));

  const bool exact = cfg.pricing == FaMultiConfig::Pricing::kExactBruteForce;
  if (exact && inst.n > 25) throw std::invalid_argument("exact pricing caps at 25 drivers");

  internal::CgProblem prob;
  prob.riders = inst.m;
  prob.drivers = inst.n;
  prob.max_iterations = cfg.max_iterations;
  prob.violation_threshold = exact ? 1e-9 : cfg.eps / 2.0;
  prob.oracle_slack = exact ? 0.0 : cfg.eps / 2.0;
  prob.column_value = [&](int rider, const std::vector<int>& set) {
    return mnl_value(DriverView::row_subset(inst, rider, set));
  };
  prob.warm_start.assign(inst.m, {});
  for (int i = 0; i < inst.m; ++i) prob.warm_start[i].push_back(mnl_best_subset(views[i]).set);
  prob.price = [&](int rider, const std::vector<double>& alpha) -> std::pair<std::vector<int>, double> {
    if (exact) {
      // 2^n scan, exact Lagrangian maximum.
      const DriverView& view = views[rider];
      const int n = static_cast<int>(view.size());
      double best_net = 0.0;
      std::uint32_t best_mask = 0;
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double num = 0.0, den = 1.0, c = 0.0;
        for (int j = 0; j < n; ++j) {
          if (!(mask >> j & 1u)) continue;
          num += view.weights[j] * view.probs[j];
          den += view.probs[j];
          c += alpha[view.ids[j]];
        }
        const double net = num / den - c;
        if (net > best_net) {
          best_net = net;
          best_mask = mask;
        }
      }
      std::vector<int> set;
      for (int j = 0; j < n; ++j)
        if (best_mask >> j & 1u) set.push_back(view.ids[j]);
      return {std::move(set), best_net};
    }
    DemandSet d = demand_oracle_mnl(views[rider], alpha, cfg.eps);
    return {std::move(d.set), d.net};
  };

  internal::CgResult cg = internal::run_column_generation(prob);

  FractionalSolution out;
  out.columns.assign(inst.m, {});
  out.marginals.assign(inst.m, std::vector<double>(inst.n, 0.0));
  for (int i = 0; i < inst.m; ++i) {
    for (auto& [set, weight] : cg.columns[i]) {
      for (int j : set) out.marginals[i][j] += weight;
      out.columns[i].push_back({set, weight});
    }
  }
  out.alpha = std::move(cg.alpha);
  out.beta = std::move(cg.beta);
  out.objective = cg.objective;
  out.upper_bound = cg.upper_bound;
  out.certified = cg.certified;
  out.iterations = cg.iterations;
  out.objective_history = std::move(cg.objective_history);
  return out;
}

Assignment round_proposals(const Instance& inst, const FractionalSolution& frac, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Assignment out;
  out.sets.assign(inst.m, {});
  for (int j = 0; j < inst.n; ++j) {
    double total = 0.0;
    for (int i = 0; i < inst.m; ++i) total += frac.marginals[i][j];
    total = std::min(total, 1.0);  // LP round-off can overshoot
    const double coin = rng.next_unit();
    if (coin >= total) continue;
    // coin is uniform on [0, total): reuse it for the categorical draw,
    // which lands on rider i with probability exactly x_ij.
    double acc = 0.0;
    int chosen = inst.m - 1;
    for (int i = 0; i < inst.m; ++i) {
      acc += frac.marginals[i][j];
      if (coin < acc) {
        chosen = i;
        break;
      }
    }
    out.sets[chosen].push_back(j);
  }
  return out;
}

Assignment round_and_prune(const Instance& inst, const FractionalSolution& frac, const FaMultiConfig& cfg) {
  Assignment out = round_proposals(inst, frac, cfg.seed);
  PtasConfig ptas{cfg.delta, 1e8};
  for (int i = 0; i < inst.m; ++i) {
    DriverView proposed = DriverView::row_subset(inst, i, out.sets[i]);
    out.sets[i] = prune(proposed, ptas).set;
  }
  return out;
}

FaMultiResult fa_multi_solve(const Instance& inst, const FaMultiConfig& cfg) {
  if (cfg.repetitions < 1) throw std::invalid_argument("fa_multi_solve: repetitions must be >= 1");
  FractionalSolution frac = solve_config_lp(inst, cfg);
  FaMultiResult best;
  best.lp_bound = frac.upper_bound;
  best.certified = frac.certified;
  best.welfare = -1.0;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    FaMultiConfig draw = cfg;
    draw.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
    Assignment assignment = round_and_prune(inst, frac, draw);
    double welfare = 0.0;
    for (int i = 0; i < inst.m; ++i)
      welfare += fa_value(DriverView::row_subset(inst, i, assignment.sets[i]));
    if (welfare > best.welfare) {
      best.welfare = welfare;
      best.assignment = std::move(assignment);
    }
  }
  return best;
}

}  // namespace dispatchkit
