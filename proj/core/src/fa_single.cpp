#include "dispatchkit/fa_single.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dispatchkit {

namespace {

int bucket_count(double delta) {
  return static_cast<int>(std::ceil(std::log(3.0) / std::log1p(delta)));
}

struct Candidate {
  std::vector<int> positions;  // positions into the view
};

// Sorted-id lexicographic comparison used for deterministic tie-breaks.
bool ids_lex_less(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a < b;
}

class BestTracker {
 public:
  explicit BestTracker(const DriverView& view) : view_(view) {}

  void consider(const std::vector<int>& positions) {
    ++evaluated_;
    const double v = fa_value(view_.subset(positions));
    std::vector<int> ids;
    ids.reserve(positions.size());
    for (int pos : positions) ids.push_back(view_.ids[pos]);
    if (!has_best_ || v > value_ || (v == value_ && ids_lex_less(ids, set_))) {
      has_best_ = true;
      value_ = v;
      set_ = std::move(ids);
    }
  }

  SelectResult result() const {
    SelectResult out;
    out.set = set_;
    std::sort(out.set.begin(), out.set.end());
    out.value = value_;
    out.candidates = evaluated_;
    return out;
  }

 private:
  const DriverView& view_;
  bool has_best_ = false;
  double value_ = 0.0;
  std::vector<int> set_;
  std::size_t evaluated_ = 0;
};

}  // namespace

SelectResult ptas_select(const DriverView& view, const PtasConfig& cfg) {
  const int n = static_cast<int>(view.size());
  if (n < 1) throw std::invalid_argument("ptas_select: view must be nonempty");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw std::invalid_argument("ptas_select: delta must be in (0,1)");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (view.weights[a] != view.weights[b]) return view.weights[a] > view.weights[b];
    return view.ids[a] < view.ids[b];
  });

  const int buckets = bucket_count(cfg.delta);

  // Pre-count the enumeration so oversized instances are refused up front.
  double total = static_cast<double>(n) + 1.0;
  std::vector<std::vector<std::vector<int>>> band_buckets(std::max(0, n - 1));
  std::vector<std::vector<int>> highs(std::max(0, n - 1));
  for (int k = 0; k + 1 < n; ++k) {
    const double w_high = view.weights[order[k]];
    const double top = view.weights[order[k + 1]];
    std::vector<int>& high = highs[k];
    for (int pos = 0; pos < n; ++pos)
      if (view.weights[pos] >= w_high) high.push_back(pos);
    if (top <= 0.0) {
      total += 1.0;
      continue;
    }
    const double lo = top / 3.0;
    std::vector<double> edges(buckets + 1);
    for (int l = 0; l <= buckets; ++l) edges[l] = lo * std::pow(1.0 + cfg.delta, l);
    edges[buckets] = std::max(edges[buckets], top);
    auto& bb = band_buckets[k];
    bb.assign(buckets, {});
    for (int pos = 0; pos < n; ++pos) {
      const double w = view.weights[pos];
      if (w >= w_high || w < lo || w > top) continue;
      int l = buckets - 1;
      // Half-open [edges[l], edges[l+1}); the final bucket is closed above.
      while (l > 0 && w < edges[l]) --l;
      bb[l].push_back(pos);
    }
    double combos = 1.0;
    for (auto& bucket : bb) {
      std::sort(bucket.begin(), bucket.end(), [&](int a, int b) {
        if (view.probs[a] != view.probs[b]) return view.probs[a] > view.probs[b];
        return view.ids[a] < view.ids[b];
      });
      combos *= static_cast<double>(bucket.size()) + 1.0;
    }
    total += combos;
  }
  if (total > cfg.max_candidates) {
    double delta = cfg.delta;
    while (delta < 0.99 && std::pow(static_cast<double>(n), bucket_count(delta)) > cfg.max_candidates)
      delta = delta * 2.0;
    throw std::invalid_argument("ptas_select: enumeration of ~" + std::to_string(total) +
                                " candidates exceeds cap " + std::to_string(cfg.max_candidates) +
                                "; retry with delta >= " + std::to_string(std::min(delta, 0.99)));
  }

  BestTracker best(view);

  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  best.consider(all);
  for (int pos = 0; pos < n; ++pos) best.consider({pos});

  for (int k = 0; k + 1 < n; ++k) {
    const std::vector<int>& high = highs[k];
    if (view.weights[order[k + 1]] <= 0.0) {
      best.consider(high);
      continue;
    }
    const auto& bb = band_buckets[k];
    std::vector<int> counts(bb.size(), 0);
    for (;;) {
      Candidate cand;
      cand.positions = high;
      for (std::size_t l = 0; l < bb.size(); ++l)
        for (int c = 0; c < counts[l]; ++c) cand.positions.push_back(bb[l][c]);
      best.consider(cand.positions);
      // Odometer over per-bucket counts 0..|bucket|.
      std::size_t l = 0;
      while (l < counts.size()) {
        if (counts[l] < static_cast<int>(bb[l].size())) {
          ++counts[l];
          break;
        }
        counts[l] = 0;
        ++l;
      }
      if (l == counts.size()) break;
    }
  }

  return best.result();
}

SelectResult brute_single(const DriverView& view) {
  const int n = static_cast<int>(view.size());
  if (n > 25) throw std::invalid_argument("brute_single: set size " + std::to_string(n) + " exceeds cap 25");
  double best_value = 0.0;
  std::vector<int> best_ids;
  std::size_t leaves = 0;

  std::vector<int> chosen;
  auto consider_leaf = [&](const FaAccumulator& acc) {
    ++leaves;
    const double v = acc.value();
    std::vector<int> ids;
    ids.reserve(chosen.size());
    for (int pos : chosen) ids.push_back(view.ids[pos]);
    if (v > best_value || (v == best_value && ids_lex_less(ids, best_ids))) {
      best_value = v;
      best_ids = std::move(ids);
    }
  };

  // Depth-first over include/exclude; the accumulator is copied on include.
  auto rec = [&](auto&& self, int pos, const FaAccumulator& acc) -> void {
    if (pos == n) {
      consider_leaf(acc);
      return;
    }
    self(self, pos + 1, acc);
    FaAccumulator with = acc;
    with.add(view.weights[pos], view.probs[pos]);
    chosen.push_back(pos);
    self(self, pos + 1, with);
    chosen.pop_back();
  };
  FaAccumulator empty;
  if (n == 0) {
    consider_leaf(empty);
  } else {
    rec(rec, 0, empty);
  }

  SelectResult out;
  out.set = best_ids;
  std::sort(out.set.begin(), out.set.end());
  out.value = best_value;
  out.candidates = leaves;
  return out;
}

SelectResult prune(const DriverView& proposed, const PtasConfig& cfg) {
  if (proposed.empty()) return SelectResult{};
  return ptas_select(proposed, cfg);
}

}  // namespace dispatchkit
