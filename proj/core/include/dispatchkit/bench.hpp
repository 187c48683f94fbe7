#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dispatchkit {

/// One solved instance. `certified` is "exact" when the ratio denominator
/// is a brute-force optimum, "bound" when it is a dual-certified LP bound
/// (bound ratios), "flagged" when certification was not reached, and
/// "error:<reason>" for per-instance failures.
struct BenchRecord {
  std::string instance_id;
  std::uint64_t seed = 0;
  int m = 0;
  int n = 0;
  std::string algorithm;
  std::string protocol;  // fa | ba
  double objective = 0.0;
  double oracle = 0.0;
  double ratio = 0.0;
  double wall_ms = 0.0;
  std::string certified;
};

struct BenchConfig {
  std::vector<std::pair<int, int>> sizes;   // (m, n)
  std::vector<std::string> algorithms;      // see algorithm_names()
  int instances_per_size = 100;
  std::uint64_t seed = 0;
  double eps = 0.05;
  double delta = 0.1;
  int repetitions = 1;       // rounding draws for fa-multi / ba-cg
  double oracle_budget = 1e7;  // above this, LP bounds replace brute force
  bool record_timing = true;   // false writes wall_ms = 0 (byte-stable CSV)
  int threads = 0;             // 0: DISPATCHKIT_THREADS env, else hardware
};

/// Known bench algorithm names: ed, ed-ba, fa-greedy, fa-multi, ba-greedy,
/// ba-cg, ba-homog, ba-lp-bound, opt-fa, opt-ba. "ed" scores against the
/// first-accept oracle; "ed-ba" is the same solver against the best-accept
/// oracle.
const std::vector<std::string>& algorithm_names();

/// Generates, solves, and scores every (size, instance, algorithm) cell.
/// Instances run in parallel across a worker pool; records come back in
/// deterministic instance order regardless of the schedule. Per-instance
/// failures are recorded and the run continues.
std::vector<BenchRecord> bench_run(const BenchConfig& cfg);

extern const char* const kCsvHeader;  // exact column order

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out);

struct HistogramSpec {
  int bins = 20;
  double lo = 0.8;
  double hi = 1.0;
};

/// Fixed-width ratio histogram per (algorithm, protocol) series; ratios are
/// clamped into [lo, hi]. Malformed CSV rows are skipped and counted.
struct Histogram {
  struct Series {
    std::string algorithm;
    std::string protocol;
    std::vector<long> counts;
  };
  HistogramSpec spec;
  std::vector<Series> series;
  long skipped = 0;
};

Histogram histogram_export(std::istream& csv, const HistogramSpec& spec);
void write_histogram(const Histogram& hist, std::ostream& out);

}  // namespace dispatchkit
