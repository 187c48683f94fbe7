#pragma once

#include <vector>

#include "dispatchkit/valuation.hpp"

namespace dispatchkit {

/// Accuracy and safety knobs for the single-rider first-accept scheme.
/// The band around the guessed threshold is split into
/// ceil(ln 3 / ln(1+delta)) geometric buckets; enumeration is refused when
/// the total candidate count would exceed max_candidates.
struct PtasConfig {
  double delta = 0.1;
  double max_candidates = 1e8;
};

struct SelectResult {
  std::vector<int> set;  // driver ids, ascending
  double value = 0.0;
  std::size_t candidates = 0;  // sets evaluated
};

/// (1-delta)-approximate maximizer of fa_value over all subsets of the view.
/// For each guess of the threshold position k it keeps every driver with
/// weight >= w_(k), buckets the band [w_(k+1)/3, w_(k+1)] geometrically,
/// and enumerates per-bucket counts, taking highest-probability drivers
/// within a bucket. The full set and every singleton are also evaluated,
/// which covers the boundary cases the k-loop misses.
SelectResult ptas_select(const DriverView& view, const PtasConfig& cfg);

/// Exact argmax of fa_value over all 2^n subsets; n <= 25. Ties resolve to
/// the lexicographically smallest id set. Test oracle for ptas_select.
SelectResult brute_single(const DriverView& view);

/// ptas_select on a restricted view: returns a subset of the proposed set
/// whose value is within (1-delta) of the best subset value. Empty input
/// prunes to the empty set.
SelectResult prune(const DriverView& proposed, const PtasConfig& cfg);

}  // namespace dispatchkit
