#include "dispatchkit/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dispatchkit/rng.hpp"

namespace dispatchkit {

DriverView DriverView::row(const Instance& inst, int rider) {
  DriverView view;
  view.weights.reserve(inst.n);
  for (int j = 0; j < inst.n; ++j) view.push(inst.weight(rider, j), inst.prob(rider, j), j);
  return view;
}

DriverView DriverView::row_subset(const Instance& inst, int rider, std::span<const int> drivers) {
  DriverView view;
  for (int j : drivers) view.push(inst.weight(rider, j), inst.prob(rider, j), j);
  return view;
}

DriverView DriverView::subset(std::span<const int> positions) const {
  DriverView view;
  for (int pos : positions) view.push(weights[pos], probs[pos], ids[pos]);
  return view;
}

void FaAccumulator::add(double w, double p) {
  const double a = 1.0 - p;
  // h <- h * (a + p t) + w p g, using the old g; then g <- g * (a + p t).
  std::vector<double> nh(h_.size() + 1, 0.0);
  for (std::size_t r = 0; r < h_.size(); ++r) {
    nh[r] += h_[r] * a;
    nh[r + 1] += h_[r] * p;
  }
  const double wp = w * p;
  for (std::size_t r = 0; r < g_.size(); ++r) nh[r] += wp * g_[r];
  h_ = std::move(nh);

  std::vector<double> ng(g_.size() + 1, 0.0);
  for (std::size_t r = 0; r < g_.size(); ++r) {
    ng[r] += g_[r] * a;
    ng[r + 1] += g_[r] * p;
  }
  g_ = std::move(ng);
}

double FaAccumulator::value() const {
  double f = 0.0;
  for (std::size_t r = h_.size(); r > 0; --r) f += h_[r - 1] / static_cast<double>(r);
  return f;
}

double FaAccumulator::denominator() const {
  double b = 0.0;
  for (std::size_t r = g_.size(); r > 0; --r) b += g_[r - 1] / static_cast<double>(r);
  return b;
}

double FaAccumulator::numerator() const {
  // int_0^1 (1-t) t^r dt = 1/(r+1) - 1/(r+2)
  double a = 0.0;
  for (std::size_t r = h_.size(); r > 0; --r)
    a += h_[r - 1] * (1.0 / static_cast<double>(r) - 1.0 / static_cast<double>(r + 1));
  return a;
}

double fa_value(const DriverView& view) {
  FaAccumulator acc;
  for (std::size_t j = 0; j < view.size(); ++j) acc.add(view.weights[j], view.probs[j]);
  return acc.value();
}

double ba_value(const DriverView& view) {
  const std::size_t n = view.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (view.weights[a] != view.weights[b]) return view.weights[a] > view.weights[b];
    return view.ids[a] < view.ids[b];
  });
  double total = 0.0;
  double none_above = 1.0;
  for (int pos : order) {
    total += view.weights[pos] * view.probs[pos] * none_above;
    none_above *= 1.0 - view.probs[pos];
  }
  return total;
}

double mnl_value(const DriverView& view) {
  if (view.empty()) return 0.0;
  double num = 0.0, den = 1.0;
  for (std::size_t j = 0; j < view.size(); ++j) {
    num += view.weights[j] * view.probs[j];
    den += view.probs[j];
  }
  return num / den;
}

double value(const DriverView& view, ValuationKind kind) {
  switch (kind) {
    case ValuationKind::kFirstAccept: return fa_value(view);
    case ValuationKind::kBestAccept: return ba_value(view);
    case ValuationKind::kMnl: return mnl_value(view);
  }
  return 0.0;
}

ThresholdParts fa_threshold(const DriverView& view) {
  FaAccumulator acc;
  for (std::size_t j = 0; j < view.size(); ++j) acc.add(view.weights[j], view.probs[j]);
  ThresholdParts parts;
  parts.numerator = acc.numerator();
  parts.denominator = acc.denominator();
  parts.tau = parts.numerator / parts.denominator;
  return parts;
}

namespace {

// Lexicographic order on the sorted id lists of two subset masks.
bool mask_lex_less(std::uint32_t a, std::uint32_t b, const std::vector<int>& ids) {
  std::vector<int> va, vb;
  for (std::size_t j = 0; j < ids.size(); ++j) {
    if (a >> j & 1u) va.push_back(ids[j]);
    if (b >> j & 1u) vb.push_back(ids[j]);
  }
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  return va < vb;
}

}  // namespace

ClosureResult closure_value(const DriverView& view, ValuationKind kind) {
  const std::size_t n = view.size();
  if (n > 25) throw std::invalid_argument("closure_value: set size " + std::to_string(n) + " exceeds cap 25");
  ClosureResult best;
  best.value = 0.0;  // empty subset
  std::uint32_t best_mask = 0;
  std::vector<int> positions;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    positions.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1u) positions.push_back(static_cast<int>(j));
    const double v = value(view.subset(positions), kind);
    if (v > best.value || (v == best.value && mask_lex_less(mask, best_mask, view.ids))) {
      best.value = v;
      best_mask = mask;
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (best_mask >> j & 1u) best.best.push_back(view.ids[j]);
  std::sort(best.best.begin(), best.best.end());
  return best;
}

SimResult simulate(const DriverView& view, ValuationKind kind, long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  if (kind == ValuationKind::kMnl) throw std::invalid_argument("simulate: only fa and ba protocols are simulable");
  SplitMix64 rng(seed);
  const std::size_t n = view.size();
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < trials; ++t) {
    double payoff = 0.0;
    if (kind == ValuationKind::kFirstAccept) {
      // Reservoir selection of a uniformly random acceptor.
      int acceptors = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.next_unit() < view.probs[j]) {
          ++acceptors;
          if (rng.next_below(static_cast<std::uint64_t>(acceptors)) == 0) payoff = view.weights[j];
        }
      }
    } else {
      for (std::size_t j = 0; j < n; ++j)
        if (rng.next_unit() < view.probs[j]) payoff = std::max(payoff, view.weights[j]);
    }
    sum += payoff;
    sumsq += payoff * payoff;
  }
  SimResult out;
  out.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    const double var = std::max(0.0, (sumsq - sum * out.mean) / static_cast<double>(trials - 1));
    out.std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return out;
}

}  // namespace dispatchkit
