#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dispatchkit/instance.hpp"
#include "dispatchkit/valuation.hpp"

namespace dispatchkit {

struct EdConfig {
  // Edge objective for the matching. Reported welfare is always the
  // expected value p*w of the matched pairs; kRawWeight only changes which
  // matching is selected (sensitivity runs).
  enum class EdgeWeight { kProbTimesWeight, kRawWeight } edge_weight = EdgeWeight::kProbTimesWeight;
};

/// Exclusive dispatch: at most one driver per rider via maximum-weight
/// matching on p_ij * w_ij. Singleton sets score identically under first-
/// and best-accept.
SolveResult ed_solve(const Instance& inst, const EdConfig& cfg = {});

/// Greedy core shared by the fa/ba variants: visit drivers in the given
/// order, assign each to the rider with the largest strictly positive
/// marginal (ties to the lower rider index), leave it unassigned otherwise.
SolveResult greedy_in_order(const Instance& inst, std::span<const int> driver_order, ValuationKind kind);

/// greedy_in_order under first-accept marginals with a seeded random order.
/// Marginals can be negative, so drivers may stay unassigned.
SolveResult fa_greedy(const Instance& inst, std::uint64_t seed);

struct OracleBudget {
  double max_states = 1e7;  // cap on (m+1)^n
};

/// Ground truth: enumerate every map driver -> {unused, rider} and return
/// the exact welfare maximizer under the given protocol. Ties resolve to
/// the first maximizer in enumeration order (unused before rider 0, ...),
/// i.e. the lexicographically smallest assignment map.
SolveResult opt_bruteforce(const Instance& inst, ValuationKind kind, const OracleBudget& budget = {});

}  // namespace dispatchkit
