#include "dispatchkit/ba_multi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "config_lp_internal.hpp"
#include "dispatchkit/baselines.hpp"
#include "dispatchkit/matching.hpp"
#include "dispatchkit/rng.hpp"

namespace dispatchkit {

SolveResult ba_homogeneous_solve(const Instance& inst) {
  require_valid(inst);
  const double p = inst.probs[0];
  for (double q : inst.probs)
    if (std::abs(q - p) > 1e-12)
      throw std::invalid_argument("ba_homogeneous_solve: probabilities are not homogeneous");

  SolveResult out;
  out.assignment.sets.assign(inst.m, {});
  if (p <= 1e-12) return out;  // nobody accepts

  int slots;
  if (p >= 1.0 - 1e-12) {
    slots = 1;  // later slots carry zero coefficient
  } else {
    // Slots whose coefficient drops below 1e-12 cannot move the optimum at
    // solver tolerance.
    const double needed = std::ceil(std::log(1e-12) / std::log1p(-p));
    slots = static_cast<int>(std::min(static_cast<double>(inst.n), std::max(1.0, needed)));
  }

  std::vector<double> coeff(slots);
  for (int l = 0; l < slots; ++l) coeff[l] = p * std::pow(1.0 - p, l);

  std::vector<std::vector<double>> graph(inst.n, std::vector<double>(inst.m * slots, 0.0));
  for (int j = 0; j < inst.n; ++j)
    for (int i = 0; i < inst.m; ++i)
      for (int l = 0; l < slots; ++l) graph[j][i * slots + l] = coeff[l] * inst.weight(i, j);

  MatchingResult matched = max_weight_matching(graph);
  for (int j = 0; j < inst.n; ++j) {
    if (matched.match[j] < 0) continue;
    out.assignment.sets[matched.match[j] / slots].push_back(j);
  }
  for (int i = 0; i < inst.m; ++i) {
    auto& set = out.assignment.sets[i];
    std::sort(set.begin(), set.end(), [&](int a, int b) {
      if (inst.weight(i, a) != inst.weight(i, b)) return inst.weight(i, a) > inst.weight(i, b);
      return a < b;
    });
    out.welfare += ba_value(DriverView::row_subset(inst, i, set));
  }
  if (std::abs(out.welfare - matched.total) > 1e-9 * (1.0 + std::abs(out.welfare)))
    throw std::runtime_error("ba_homogeneous_solve: matching weight and set welfare disagree");
  return out;
}

SolveResult ba_greedy(const Instance& inst, std::uint64_t seed) {
  require_valid(inst);
  std::vector<int> order(inst.n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  rng.shuffle(order);
  return greedy_in_order(inst, order, ValuationKind::kBestAccept);
}

namespace {

// All per-driver marginals of the best-accept multilinear extension for one
// rider in a single pass: with drivers ranked by weight descending,
//   marginal_j = p_j * P_j * (w_j - T_j)
// where P_j multiplies (1-q_k) over ranks above j and T_j accumulates the
// value contributed by ranks below j, both excluding j itself.
void ba_marginals(const std::vector<double>& w, const std::vector<double>& q, const std::vector<double>& p,
                  const std::vector<int>& rank, std::vector<double>& out) {
  const int n = static_cast<int>(w.size());
  std::vector<double> below(n + 1, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    const int j = rank[r];
    below[r] = w[j] * q[j] + (1.0 - q[j]) * below[r + 1];
  }
  double above = 1.0;
  for (int r = 0; r < n; ++r) {
    const int j = rank[r];
    out[j] = p[j] * above * (w[j] - below[r + 1]);
    above *= 1.0 - q[j];
  }
}

}  // namespace

SolveResult ba_continuous_greedy(const Instance& inst, const CgConfig& cfg) {
  require_valid(inst);
  if (cfg.steps < 1) throw std::invalid_argument("ba_continuous_greedy: steps must be >= 1");
  if (cfg.repetitions < 1) throw std::invalid_argument("ba_continuous_greedy: repetitions must be >= 1");

  const int m = inst.m, n = inst.n;
  std::vector<std::vector<double>> x(m, std::vector<double>(n, 0.0));

  std::vector<std::vector<double>> w(m, std::vector<double>(n)), p(m, std::vector<double>(n));
  std::vector<std::vector<int>> rank(m, std::vector<int>(n));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      w[i][j] = inst.weight(i, j);
      p[i][j] = inst.prob(i, j);
      rank[i][j] = j;
    }
    std::sort(rank[i].begin(), rank[i].end(), [&, i](int a, int b) {
      if (w[i][a] != w[i][b]) return w[i][a] > w[i][b];
      return a < b;
    });
  }

  const double step = 1.0 / static_cast<double>(cfg.steps);
  std::vector<double> q(n), marg(n);
  std::vector<std::vector<double>> marginals(m, std::vector<double>(n));
  for (int s = 0; s < cfg.steps; ++s) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) q[j] = x[i][j] * p[i][j];
      ba_marginals(w[i], q, p[i], rank[i], marg);
      marginals[i] = marg;
    }
    for (int j = 0; j < n; ++j) {
      int best_i = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (marginals[i][j] > best) {
          best = marginals[i][j];
          best_i = i;
        }
      }
      if (best_i >= 0) x[best_i][j] = std::min(1.0, x[best_i][j] + step);
    }
  }

  SolveResult best;
  best.welfare = -1.0;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
    Assignment assignment;
    assignment.sets.assign(m, {});
    for (int j = 0; j < n; ++j) {
      const double coin = rng.next_unit();
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        acc += x[i][j];
        if (coin < acc) {
          assignment.sets[i].push_back(j);
          break;
        }
      }
    }
    double welfare = 0.0;
    for (int i = 0; i < m; ++i) welfare += ba_value(DriverView::row_subset(inst, i, assignment.sets[i]));
    if (welfare > best.welfare) {
      best.welfare = welfare;
      best.assignment = std::move(assignment);
    }
  }
  return best;
}

DemandSet ba_demand_oracle(const DriverView& view, std::span<const double> prices, double eps) {
  const int n = static_cast<int>(view.size());
  if (static_cast<int>(prices.size()) != n) throw std::invalid_argument("ba_demand_oracle: prices size mismatch");
  if (!(eps > 0.0)) throw std::invalid_argument("ba_demand_oracle: eps must be positive");
  for (double l : prices)
    if (l < 0.0) throw std::invalid_argument("ba_demand_oracle: negative price");
  if (n == 0) return {};

  // Drivers priced above the maximum possible value never help.
  std::vector<int> kept;
  for (int j = 0; j < n; ++j)
    if (prices[j] <= 1.0) kept.push_back(j);
  if (kept.empty()) return {};

  std::sort(kept.begin(), kept.end(), [&](int a, int b) {
    if (view.weights[a] != view.weights[b]) return view.weights[a] > view.weights[b];
    return view.ids[a] < view.ids[b];
  });
  const double grid = eps / static_cast<double>(n);
  std::vector<long> units(kept.size());
  long total_units = 0;
  for (std::size_t t = 0; t < kept.size(); ++t) {
    units[t] = static_cast<long>(std::floor(prices[kept[t]] / grid));
    total_units += units[t];
  }

  const int k = static_cast<int>(kept.size());
  const long width = total_units + 1;
  // value[t][B]: best BA value over drivers t.. with discretized spend <= B.
  std::vector<double> value(static_cast<std::size_t>(k + 1) * width, 0.0);
  std::vector<bool> take(static_cast<std::size_t>(k) * width, false);
  for (int t = k - 1; t >= 0; --t) {
    const double pt = view.probs[kept[t]];
    const double wt = view.weights[kept[t]];
    for (long b = 0; b < width; ++b) {
      double best = value[static_cast<std::size_t>(t + 1) * width + b];
      bool inc = false;
      if (b >= units[t]) {
        const double with = pt * wt + (1.0 - pt) * value[static_cast<std::size_t>(t + 1) * width + (b - units[t])];
        if (with >= best) {
          best = with;
          inc = true;
        }
      }
      value[static_cast<std::size_t>(t) * width + b] = best;
      take[static_cast<std::size_t>(t) * width + b] = inc;
    }
  }

  long best_budget = 0;
  double best_score = value[0];  // b = 0
  for (long b = 1; b < width; ++b) {
    const double score = value[b] - static_cast<double>(b) * grid;
    if (score > best_score) {
      best_score = score;
      best_budget = b;
    }
  }

  DemandSet out;
  long b = best_budget;
  for (int t = 0; t < k; ++t) {
    if (take[static_cast<std::size_t>(t) * width + b]) {
      out.set.push_back(view.ids[kept[t]]);
      b -= units[t];
    }
  }
  std::sort(out.set.begin(), out.set.end());

  std::vector<int> pos_of_id(n);
  for (int j = 0; j < n; ++j) pos_of_id[view.ids[j]] = j;
  double spend = 0.0;
  std::vector<int> positions;
  for (int id : out.set) {
    positions.push_back(pos_of_id[id]);
    spend += prices[pos_of_id[id]];
  }
  out.net = ba_value(view.subset(positions)) - spend;
  return out;
}

BaLpBound ba_config_lp_bound(const Instance& inst, double eps, int max_iterations) {
  require_valid(inst);
  if (!(eps > 0.0)) throw std::invalid_argument("ba_config_lp_bound: eps must be positive");
  if (max_iterations < 1) throw std::invalid_argument("ba_config_lp_bound: max_iterations must be >= 1");

  std::vector<DriverView> views;
  views.reserve(inst.m);
  for (int i = 0; i < inst.m; ++i) views.push_back(DriverView::row(inst, i));

  internal::CgProblem prob;
  prob.riders = inst.m;
  prob.drivers = inst.n;
  prob.max_iterations = max_iterations;
  prob.violation_threshold = eps / 2.0;
  prob.oracle_slack = eps / 2.0;
  prob.column_value = [&](int rider, const std::vector<int>& set) {
    return ba_value(DriverView::row_subset(inst, rider, set));
  };
  prob.warm_start.assign(inst.m, {});
  for (int i = 0; i < inst.m; ++i) {
    std::vector<int> full(inst.n);
    std::iota(full.begin(), full.end(), 0);
    prob.warm_start[i].push_back(std::move(full));  // unconstrained BA optimum
  }
  prob.price = [&](int rider, const std::vector<double>& alpha) -> std::pair<std::vector<int>, double> {
    DemandSet d = ba_demand_oracle(views[rider], alpha, eps / 2.0);
    return {std::move(d.set), d.net};
  };

  internal::CgResult cg = internal::run_column_generation(prob);
  BaLpBound out;
  out.bound = cg.upper_bound;
  out.master_objective = cg.objective;
  out.certified = cg.certified;
  out.iterations = cg.iterations;
  return out;
}

}  // namespace dispatchkit
