#pragma once

#include <vector>

namespace dispatchkit {

struct MatchingResult {
  std::vector<int> match;  // per row: column index, or -1 for unmatched
  double total = 0.0;
};

/// Exact maximum-weight bipartite matching on a dense rectangular matrix of
/// finite nonnegative weights (Hungarian algorithm with potentials).
/// With allow_unmatched, rows and columns may stay unmatched whenever that
/// does not lower the total; otherwise every row must be matched and the
/// matrix needs at least as many columns as rows.
MatchingResult max_weight_matching(const std::vector<std::vector<double>>& weights, bool allow_unmatched = true);

}  // namespace dispatchkit
