#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dispatchkit {

/// One dispatch cycle: m riders, n drivers, per-pair match scores in [0, 1]
/// and acceptance probabilities in [0, 1]. Scores are normalized; callers
/// with raw scores divide by their maximum before building an Instance.
/// Immutable by convention once constructed; safe to share across threads.
struct Instance {
  int m = 0;
  int n = 0;
  std::vector<double> weights;  // row-major, riders outer
  std::vector<double> probs;    // row-major, riders outer

  double weight(int rider, int driver) const { return weights[static_cast<std::size_t>(rider) * n + driver]; }
  double prob(int rider, int driver) const { return probs[static_cast<std::size_t>(rider) * n + driver]; }
  double& weight(int rider, int driver) { return weights[static_cast<std::size_t>(rider) * n + driver]; }
  double& prob(int rider, int driver) { return probs[static_cast<std::size_t>(rider) * n + driver]; }
};

/// Disjoint notification sets, one per rider. Driver indices in [0, n).
struct Assignment {
  std::vector<std::vector<int>> sets;
};

/// A solved instance: the chosen notification sets and their welfare under
/// the solver's protocol.
struct SolveResult {
  Assignment assignment;
  double welfare = 0.0;
};

/// Returns every violated invariant, with indices; empty means valid.
std::vector<std::string> validate(const Instance& inst);
std::vector<std::string> validate(const Assignment& assignment, int m, int n);

/// Throws std::invalid_argument listing all violations if any.
void require_valid(const Instance& inst);

/// All 2*m*n entries i.i.d. uniform on [0, 1), deterministic in the seed.
/// One SplitMix64 stream fills weights row-major, then probs row-major.
Instance gen_uniform(int m, int n, std::uint64_t seed);

/// A 3-Partition instance: 3*triples positive integers summing to
/// triples * target, each strictly between target/4 and target/2.
struct ThreePartitionSpec {
  std::vector<long long> values;
  long long target = 0;
  int triples = 0;
};

std::vector<std::string> validate(const ThreePartitionSpec& spec);

struct HardnessInstance {
  Instance instance;
  double welfare_threshold = 0.0;  // m * (1 - 2^-target)
};

/// Adversarial welfare-maximization instance from a 3-Partition spec:
/// identical riders, unit weights, p_j = 1 - 2^-a_j (exact dyadic; values
/// above 52 are rejected). Optimal welfare is at most the returned
/// threshold, with equality exactly when the values can be partitioned
/// into triples summing to the target.
HardnessInstance gen_hardness(const ThreePartitionSpec& spec);

/// JSON serialization. Floats round-trip bit-exactly (shortest decimal
/// representation that parses back to the same double).
/// Instance:   {"m":int,"n":int,"weights":[[..]..],"probs":[[..]..]}
/// Assignment: {"sets":[[int..]..]}
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);
Instance parse_instance(const std::string& json_text);
std::string instance_to_json(const Instance& inst);

Assignment read_assignment(const std::string& path);
void write_assignment(const Assignment& assignment, const std::string& path);
Assignment parse_assignment(const std::string& json_text);
std::string assignment_to_json(const Assignment& assignment);

}  // namespace dispatchkit
