#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dispatchkit/fa_single.hpp"
#include "dispatchkit/instance.hpp"
#include "dispatchkit/valuation.hpp"

namespace dispatchkit {

/// A set of driver ids together with its net value (value minus prices).
struct DemandSet {
  std::vector<int> set;
  double net = 0.0;
};

struct FaMultiConfig {
  double eps = 0.05;    // additive accuracy of the configuration LP
  double delta = 0.1;   // pruning accuracy
  std::uint64_t seed = 0;
  int max_iterations = 200;
  int repetitions = 1;  // rounding draws; the best realized welfare wins
  enum class Pricing { kFptas, kExactBruteForce } pricing = Pricing::kFptas;
};

/// Best MNL value over weight-ordered prefixes, which attains the
/// unconstrained optimum (the optimal assortment is revenue ordered).
struct MnlPrefixOpt {
  double value = 0.0;
  std::vector<int> set;  // driver ids
};
MnlPrefixOpt mnl_best_subset(const DriverView& view);

/// Budgeted MNL maximization: returns a set with total cost <= budget and
/// mnl_value >= (1-eps) times the best budget-feasible value. Parametric
/// search on the objective with a knapsack subroutine per guess; polynomial
/// in (|view|, 1/eps).
std::vector<int> mnl_knapsack_fptas(const DriverView& view, std::span<const double> costs, double budget,
                                    double eps);

/// Additive-eps maximizer of mnl_value(S) - sum of costs over S, built from
/// mnl_knapsack_fptas runs over the budget grid r*eps/2, r = 0..ceil(2/eps).
DemandSet demand_oracle_mnl(const DriverView& view, std::span<const double> costs, double eps);

/// Configuration-LP solution: per-rider columns with weights summing to one,
/// plus the derived per-(rider,driver) marginals.
struct FractionalSolution {
  struct Column {
    std::vector<int> set;
    double weight = 0.0;
  };
  std::vector<std::vector<Column>> columns;   // per rider
  std::vector<std::vector<double>> marginals; // x[i][j]
  std::vector<double> alpha;  // final driver duals
  std::vector<double> beta;   // final rider duals
  double objective = 0.0;    // restricted master optimum
  double upper_bound = 0.0;  // dual-certified bound on the full LP optimum
  bool certified = false;    // pricing found no violation above eps/2
  int iterations = 0;
  std::vector<double> objective_history;
};

/// Column generation for the MNL configuration LP: solve the restricted
/// master, price every rider through the demand oracle, add columns whose
/// reduced cost exceeds eps/2, repeat. Warm-started with the empty set and
/// each rider's revenue-ordered optimum. With exact brute-force pricing the
/// threshold drops to 1e-9 and the master converges to the full LP optimum.
FractionalSolution solve_config_lp(const Instance& inst, const FaMultiConfig& cfg);

/// The independent rounding step alone: per driver, one coin with success
/// probability sum_i x_ij, then a categorical rider draw proportional to
/// x_ij. Returns the raw proposals.
Assignment round_proposals(const Instance& inst, const FractionalSolution& frac, std::uint64_t seed);

/// Independent rounding of the marginals followed by a per-rider PTAS prune.
Assignment round_and_prune(const Instance& inst, const FractionalSolution& frac, const FaMultiConfig& cfg);

struct FaMultiResult {
  Assignment assignment;
  double welfare = 0.0;
  double lp_bound = 0.0;  // certified upper bound on the MNL config LP
  bool certified = false;
};

/// Full pipeline: configuration LP, repeated rounding draws, pruning; keeps
/// the draw with the best realized first-accept welfare.
FaMultiResult fa_multi_solve(const Instance& inst, const FaMultiConfig& cfg);

}  // namespace dispatchkit
