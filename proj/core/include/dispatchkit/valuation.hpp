#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dispatchkit/instance.hpp"

namespace dispatchkit {

enum class ValuationKind { kFirstAccept, kBestAccept, kMnl };

/// One rider's (weight, probability) pairs over a candidate set of drivers.
/// `ids` keeps the original driver indices so solver outputs can be mapped
/// back to the instance; helpers default them to positions.
struct DriverView {
  std::vector<double> weights;
  std::vector<double> probs;
  std::vector<int> ids;

  std::size_t size() const { return weights.size(); }
  bool empty() const { return weights.empty(); }
  void push(double w, double p, int id) {
    weights.push_back(w);
    probs.push_back(p);
    ids.push_back(id);
  }

  /// Entire row of the instance for one rider; ids are driver indices.
  static DriverView row(const Instance& inst, int rider);
  /// Selected drivers of one rider's row; ids are the given driver indices.
  static DriverView row_subset(const Instance& inst, int rider, std::span<const int> drivers);
  /// Subset of this view by positions; ids carried over.
  DriverView subset(std::span<const int> positions) const;
};

/// Incremental state for exact first-accept evaluation. Maintains the
/// polynomial coefficients of
///   g(t) = prod_k (1 - p_k + p_k t)
///   h(t) = sum_j w_j p_j prod_{k != j} (1 - p_k + p_k t)
/// so that F = int_0^1 h, and the break-even threshold numerator/denominator
/// are A = int_0^1 (1-t) h and B = int_0^1 g. Adding a driver costs O(|S|),
/// so building a set costs O(|S|^2) total. Copyable, which makes it suitable
/// for branch-and-evaluate enumeration.
class FaAccumulator {
 public:
  FaAccumulator() : g_{1.0}, h_{} {}

  void add(double w, double p);
  double value() const;        // F(S)
  double denominator() const;  // B(S) = int g, always > 0
  double numerator() const;    // A(S) = int (1-t) h

 private:
  std::vector<double> g_;
  std::vector<double> h_;
};

/// Expected score of the winner when the rider is matched to a uniformly
/// random acceptor. Exact polynomial expansion, O(|S|^2); empty set gives 0.
double fa_value(const DriverView& view);

/// Expected score of the highest-scoring acceptor. O(|S| log |S|);
/// ties in weight are broken by driver index before forming the products.
double ba_value(const DriverView& view);

/// MNL surrogate: sum_j w_j p_j / (1 + sum_k p_k); empty set gives 0.
double mnl_value(const DriverView& view);

double value(const DriverView& view, ValuationKind kind);

/// Break-even weight threshold: adding a driver d to S has nonnegative
/// first-accept marginal iff w_d >= tau. tau(empty) = 0 with (A,B) = (0,1).
struct ThresholdParts {
  double numerator = 0.0;    // A(S)
  double denominator = 1.0;  // B(S) > 0
  double tau = 0.0;          // A/B
};

ThresholdParts fa_threshold(const DriverView& view);

/// Exact downward monotone closure max_{S' subseteq S} F(S') by exhaustive
/// enumeration; |S| <= 25. `best` holds ids of an argmax subset
/// (lexicographically smallest on exact ties). Test-grade oracle.
struct ClosureResult {
  double value = 0.0;
  std::vector<int> best;
};

ClosureResult closure_value(const DriverView& view, ValuationKind kind);

/// Monte Carlo estimate of fa_value/ba_value under the contention protocol:
/// each trial samples acceptances independently; first-accept pays a
/// uniformly random acceptor (reservoir selection), best-accept pays the
/// maximum acceptor weight. Deterministic in the seed.
struct SimResult {
  double mean = 0.0;
  double std_error = 0.0;
};

SimResult simulate(const DriverView& view, ValuationKind kind, long trials, std::uint64_t seed);

}  // namespace dispatchkit
