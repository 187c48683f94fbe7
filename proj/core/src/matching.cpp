#include "dispatchkit/matching.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dispatchkit {

MatchingResult max_weight_matching(const std::vector<std::vector<double>>& weights, bool allow_unmatched) {
  const int r = static_cast<int>(weights.size());
  int c = 0;
  for (const auto& row : weights) c = std::max(c, static_cast<int>(row.size()));
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != c) throw std::invalid_argument("max_weight_matching: ragged matrix");
    for (double w : row)
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("max_weight_matching: weights must be finite and nonnegative");
  }
  if (!allow_unmatched && r > c)
    throw std::invalid_argument("max_weight_matching: cannot match every row with fewer columns");

  MatchingResult out;
  out.match.assign(r, -1);
  if (r == 0 || c == 0) return out;

  // Minimization on negated costs; r zero-weight dummy columns let any row
  // opt out. Potentials-based shortest augmenting path, O(r^2 c).
  const int cols = allow_unmatched ? c + r : c;
  auto cost = [&](int i, int j) -> double { return j < c ? -weights[i][j] : 0.0; };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(r + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> owner(cols + 1, 0);  // 1-based rows; 0 = free
  std::vector<int> way(cols + 1, 0);
  for (int i = 1; i <= r; ++i) {
    owner[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const int i0 = owner[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const int j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (int j = 1; j <= cols; ++j) {
    if (owner[j] != 0 && j <= c) {
      out.match[owner[j] - 1] = j - 1;
      out.total += weights[owner[j] - 1][j - 1];
    }
  }
  return out;
}

}  // namespace dispatchkit
