#include "dispatchkit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dispatchkit/ba_multi.hpp"
#include "dispatchkit/baselines.hpp"
#include "dispatchkit/fa_multi.hpp"
#include "dispatchkit/instance.hpp"
#include "dispatchkit/rng.hpp"
#include "dispatchkit/valuation.hpp"

namespace dispatchkit {

const char* const kCsvHeader = "instance_id,seed,m,n,algorithm,protocol,objective,oracle,ratio,wall_ms,certified";

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"ed",    "ed-ba", "fa-greedy", "fa-multi",    "ba-greedy",
                                                 "ba-cg", "ba-homog", "ba-lp-bound", "opt-fa", "opt-ba"};
  return names;
}

namespace {

struct Oracle {
  double value = 0.0;
  bool exact = false;
  bool certified = true;
};

struct AlgOutcome {
  double objective = 0.0;
  bool certified = true;
  std::string error;
};

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return text;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int pool_size(const BenchConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("DISPATCHKIT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

bool protocol_of(const std::string& algorithm, std::string* protocol) {
  static const std::map<std::string, std::string> table = {
      {"ed", "fa"},        {"ed-ba", "ba"},  {"fa-greedy", "fa"},   {"fa-multi", "fa"},
      {"ba-greedy", "ba"}, {"ba-cg", "ba"},  {"ba-homog", "ba"},    {"ba-lp-bound", "ba"},
      {"opt-fa", "fa"},    {"opt-ba", "ba"},
  };
  auto it = table.find(algorithm);
  if (it == table.end()) return false;
  *protocol = it->second;
  return true;
}

AlgOutcome run_algorithm(const std::string& name, const Instance& inst, const BenchConfig& cfg,
                         std::uint64_t seed, const Oracle& fa_oracle, const Oracle& ba_oracle) {
  AlgOutcome out;
  try {
    if (name == "ed" || name == "ed-ba") {
      out.objective = ed_solve(inst).welfare;
    } else if (name == "fa-greedy") {
      out.objective = fa_greedy(inst, seed).welfare;
    } else if (name == "ba-greedy") {
      out.objective = ba_greedy(inst, seed).welfare;
    } else if (name == "fa-multi") {
      FaMultiConfig fc;
      fc.eps = cfg.eps;
      fc.delta = cfg.delta;
      fc.seed = seed;
      fc.repetitions = cfg.repetitions;
      FaMultiResult r = fa_multi_solve(inst, fc);
      out.objective = r.welfare;
      out.certified = r.certified;
    } else if (name == "ba-cg") {
      CgConfig cc;
      cc.seed = seed;
      cc.repetitions = cfg.repetitions;
      out.objective = ba_continuous_greedy(inst, cc).welfare;
    } else if (name == "ba-homog") {
      out.objective = ba_homogeneous_solve(inst).welfare;
    } else if (name == "ba-lp-bound") {
      BaLpBound b = ba_config_lp_bound(inst, cfg.eps);
      out.objective = b.bound;
      out.certified = b.certified;
    } else if (name == "opt-fa") {
      out.objective = fa_oracle.value;
      out.certified = fa_oracle.exact;
    } else if (name == "opt-ba") {
      out.objective = ba_oracle.value;
      out.certified = ba_oracle.exact;
    } else {
      out.error = "unknown algorithm";
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> bench_run(const BenchConfig& cfg) {
  std::vector<std::string> protocols(cfg.algorithms.size());
  bool need_fa = false, need_ba = false;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    if (!protocol_of(cfg.algorithms[a], &protocols[a]))
      throw std::invalid_argument("bench_run: unknown algorithm \"" + cfg.algorithms[a] + "\"");
    (protocols[a] == "fa" ? need_fa : need_ba) = true;
  }

  struct Task {
    int size_idx;
    int inst_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s)
    for (int k = 0; k < cfg.instances_per_size; ++k)
      tasks.push_back({static_cast<int>(s), k});

  std::vector<std::vector<BenchRecord>> buffers(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto [size_idx, inst_idx] = tasks[t];
      const auto [m, n] = cfg.sizes[size_idx];
      const std::uint64_t inst_seed = derive_seed(derive_seed(cfg.seed, size_idx), inst_idx);
      const Instance inst = gen_uniform(m, n, inst_seed);
      char idbuf[64];
      std::snprintf(idbuf, sizeof(idbuf), "s%dx%d-i%04d", m, n, inst_idx);

      const bool oracle_exact = std::pow(static_cast<double>(m + 1), n) <= cfg.oracle_budget;
      Oracle fa_oracle, ba_oracle;
      if (need_fa) {
        if (oracle_exact) {
          fa_oracle = {opt_bruteforce(inst, ValuationKind::kFirstAccept,
                                      OracleBudget{cfg.oracle_budget}).welfare,
                       true, true};
        } else {
          // Valid bound chain: FA welfare <= 2 * MNL configuration LP.
          FaMultiConfig fc;
          fc.eps = cfg.eps;
          fc.delta = cfg.delta;
          FractionalSolution frac = solve_config_lp(inst, fc);
          fa_oracle = {2.0 * frac.upper_bound, false, frac.certified};
        }
      }
      if (need_ba) {
        if (oracle_exact) {
          ba_oracle = {opt_bruteforce(inst, ValuationKind::kBestAccept,
                                      OracleBudget{cfg.oracle_budget}).welfare,
                       true, true};
        } else {
          BaLpBound b = ba_config_lp_bound(inst, cfg.eps);
          ba_oracle = {b.bound, false, b.certified};
        }
      }

      auto& rows = buffers[t];
      for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
        const std::string& name = cfg.algorithms[a];
        const Oracle& oracle = protocols[a] == "fa" ? fa_oracle : ba_oracle;
        const std::uint64_t alg_seed = derive_seed(inst_seed, 1000 + a);
        const auto start = std::chrono::steady_clock::now();
        AlgOutcome res = run_algorithm(name, inst, cfg, alg_seed, fa_oracle, ba_oracle);
        const auto stop = std::chrono::steady_clock::now();

        BenchRecord rec;
        rec.instance_id = idbuf;
        rec.seed = inst_seed;
        rec.m = m;
        rec.n = n;
        rec.algorithm = name;
        rec.protocol = protocols[a];
        rec.wall_ms = cfg.record_timing
                          ? std::chrono::duration<double, std::milli>(stop - start).count()
                          : 0.0;
        if (!res.error.empty()) {
          rec.objective = 0.0;
          rec.oracle = oracle.value;
          rec.ratio = 0.0;
          rec.certified = "error:" + sanitize(res.error);
        } else {
          rec.objective = res.objective;
          rec.oracle = oracle.value;
          rec.ratio = (rec.objective == 0.0 && rec.oracle == 0.0) ? 1.0 : rec.objective / rec.oracle;
          rec.certified = !res.certified || !oracle.certified ? "flagged" : (oracle.exact ? "exact" : "bound");
        }
        rows.push_back(std::move(rec));
      }
    }
  };

  const int threads = std::min<int>(pool_size(cfg), std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<BenchRecord> records;
  for (auto& rows : buffers)
    for (auto& rec : rows) records.push_back(std::move(rec));
  return records;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", r.wall_ms);
    out << r.instance_id << ',' << r.seed << ',' << r.m << ',' << r.n << ',' << r.algorithm << ','
        << r.protocol << ',' << format_double(r.objective) << ',' << format_double(r.oracle) << ','
        << format_double(r.ratio) << ',' << wall << ',' << r.certified << "\n";
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

Histogram histogram_export(std::istream& csv, const HistogramSpec& spec) {
  if (spec.bins < 1) throw std::invalid_argument("histogram_export: bins must be >= 1");
  if (!(spec.hi > spec.lo)) throw std::invalid_argument("histogram_export: hi must exceed lo");

  Histogram hist;
  hist.spec = spec;
  std::map<std::pair<std::string, std::string>, std::size_t> index;

  std::string line;
  if (!std::getline(csv, line)) return hist;
  const auto header = split_csv_line(line);
  int col_alg = -1, col_proto = -1, col_ratio = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "algorithm") col_alg = static_cast<int>(c);
    if (header[c] == "protocol") col_proto = static_cast<int>(c);
    if (header[c] == "ratio") col_ratio = static_cast<int>(c);
  }
  if (col_alg < 0 || col_proto < 0 || col_ratio < 0)
    throw std::invalid_argument("histogram_export: header lacks algorithm/protocol/ratio columns");

  const double width = (spec.hi - spec.lo) / spec.bins;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) <= std::max({col_alg, col_proto, col_ratio})) {
      ++hist.skipped;
      continue;
    }
    double ratio = 0.0;
    const std::string& text = fields[col_ratio];
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ratio);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(ratio)) {
      ++hist.skipped;
      continue;
    }
    const auto key = std::make_pair(fields[col_alg], fields[col_proto]);
    auto [it, fresh] = index.try_emplace(key, hist.series.size());
    if (fresh) hist.series.push_back({key.first, key.second, std::vector<long>(spec.bins, 0)});
    const double clamped = std::min(std::max(ratio, spec.lo), spec.hi);
    int bin = static_cast<int>((clamped - spec.lo) / width);
    bin = std::min(bin, spec.bins - 1);
    ++hist.series[it->second].counts[bin];
  }
  return hist;
}

void write_histogram(const Histogram& hist, std::ostream& out) {
  out << "algorithm,protocol,bin_lo,bin_hi,count\n";
  const double width = (hist.spec.hi - hist.spec.lo) / hist.spec.bins;
  for (const auto& s : hist.series) {
    for (int b = 0; b < hist.spec.bins; ++b) {
      out << s.algorithm << ',' << s.protocol << ',' << format_double(hist.spec.lo + b * width) << ','
          << format_double(hist.spec.lo + (b + 1) * width) << ',' << s.counts[b] << "\n";
    }
  }
}

}  // namespace dispatchkit
