#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dispatchkit/fa_multi.hpp"
#include "dispatchkit/instance.hpp"
#include "dispatchkit/valuation.hpp"

namespace dispatchkit {

/// Exact solver for instances where every acceptance probability equals a
/// common p. Builds the driver x (rider, slot) bipartite graph with edge
/// weight p (1-p)^(slot-1) w_ij and reads sets off a maximum-weight
/// matching. p = 0 gives the empty assignment; p = 1 keeps only slot one.
/// Throws on heterogeneous input (tolerance 1e-12). Returned sets are
/// sorted by weight descending, matching their slot order.
SolveResult ba_homogeneous_solve(const Instance& inst);

/// Marginal-value greedy under best-accept: drivers visited in a seeded
/// random order, each added to the rider with the largest strictly positive
/// marginal (ties to the lower rider index).
SolveResult ba_greedy(const Instance& inst, std::uint64_t seed);

struct CgConfig {
  int steps = 100;  // ascent steps; guarantee degrades by O(1/steps)
  std::uint64_t seed = 0;
  int repetitions = 1;  // rounding draws; best realized welfare wins
};

/// Continuous greedy on the exact multilinear extension (best-accept value
/// composes with independent inclusion, so G(x) is a closed form rather
/// than a sample average), followed by per-driver categorical rounding.
SolveResult ba_continuous_greedy(const Instance& inst, const CgConfig& cfg);

/// Additive-eps maximizer of ba_value(S) - sum of prices: drops drivers
/// priced above 1, rounds prices down to multiples of eps/n, then runs a
/// knapsack-style DP over weight-sorted drivers and the discretized budget.
/// O(n^3 / eps). The returned net uses the original prices.
DemandSet ba_demand_oracle(const DriverView& view, std::span<const double> prices, double eps);

struct BaLpBound {
  double bound = 0.0;             // dual-certified upper bound on BA welfare
  double master_objective = 0.0;  // restricted configuration-LP optimum
  bool certified = false;
  int iterations = 0;
};

/// Configuration LP for best-accept columns priced by ba_demand_oracle.
/// The bound is valid regardless of certification; certification means the
/// master also converged to within eps*m of the full LP.
BaLpBound ba_config_lp_bound(const Instance& inst, double eps, int max_iterations = 200);

}  // namespace dispatchkit
