#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dispatchkit/ba_multi.hpp"
#include "dispatchkit/baselines.hpp"
#include "dispatchkit/bench.hpp"
#include "dispatchkit/fa_multi.hpp"
#include "dispatchkit/fa_single.hpp"
#include "dispatchkit/instance.hpp"
#include "dispatchkit/valuation.hpp"

namespace dispatchkit {

namespace {

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  return out;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto x = tok.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--sizes", "expected MxN entries like 3x9");
    out.emplace_back(std::stoi(tok.substr(0, x)), std::stoi(tok.substr(x + 1)));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

ValuationKind parse_kind(const std::string& name) {
  if (name == "fa") return ValuationKind::kFirstAccept;
  if (name == "ba") return ValuationKind::kBestAccept;
  if (name == "mnl") return ValuationKind::kMnl;
  throw CLI::ValidationError("--protocol", "expected fa, ba, or mnl");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SolveArgs {
  std::string alg;
  std::string instance_path;
  std::string out_path;
  double delta = 0.1;
  double eps = 0.05;
  std::uint64_t seed = 0;
  int repetitions = 1;
  int steps = 100;
  double oracle_budget = 1e7;
  std::string ed_weights = "pw";
};

int run_solve(const SolveArgs& a, std::ostream& out) {
  const Instance inst = read_instance(a.instance_path);
  require_valid(inst);

  std::optional<SolveResult> result;
  std::string extra;
  if (a.alg == "ed") {
    EdConfig cfg;
    cfg.edge_weight =
        a.ed_weights == "w" ? EdConfig::EdgeWeight::kRawWeight : EdConfig::EdgeWeight::kProbTimesWeight;
    result = ed_solve(inst, cfg);
  } else if (a.alg == "fa-greedy") {
    result = fa_greedy(inst, a.seed);
  } else if (a.alg == "ba-greedy") {
    result = ba_greedy(inst, a.seed);
  } else if (a.alg == "fa-single-ptas") {
    if (inst.m != 1) throw std::runtime_error("fa-single-ptas expects a single-rider instance");
    SelectResult sel = ptas_select(DriverView::row(inst, 0), PtasConfig{a.delta, 1e8});
    SolveResult r;
    r.assignment.sets = {sel.set};
    r.welfare = sel.value;
    result = r;
  } else if (a.alg == "fa-multi") {
    FaMultiConfig cfg;
    cfg.eps = a.eps;
    cfg.delta = a.delta;
    cfg.seed = a.seed;
    cfg.repetitions = a.repetitions;
    FaMultiResult r = fa_multi_solve(inst, cfg);
    result = SolveResult{r.assignment, r.welfare};
    extra = "lp_bound " + fmt(r.lp_bound) + "\ncertified " + (r.certified ? "1" : "0") + "\n";
  } else if (a.alg == "ba-homog") {
    result = ba_homogeneous_solve(inst);
  } else if (a.alg == "ba-cg") {
    CgConfig cfg;
    cfg.steps = a.steps;
    cfg.seed = a.seed;
    cfg.repetitions = a.repetitions;
    result = ba_continuous_greedy(inst, cfg);
  } else if (a.alg == "ba-lp-bound") {
    BaLpBound b = ba_config_lp_bound(inst, a.eps);
    out << "bound " << fmt(b.bound) << "\n";
    out << "certified " << (b.certified ? "1" : "0") << "\n";
    return 0;
  } else if (a.alg == "opt-fa" || a.alg == "opt-ba") {
    result = opt_bruteforce(
        inst, a.alg == "opt-fa" ? ValuationKind::kFirstAccept : ValuationKind::kBestAccept,
        OracleBudget{a.oracle_budget});
  } else {
    throw std::runtime_error("unknown algorithm \"" + a.alg + "\"");
  }

  if (!a.out_path.empty()) {
    write_assignment(result->assignment, a.out_path);
  } else {
    out << assignment_to_json(result->assignment);
  }
  out << "welfare " << fmt(result->welfare) << "\n" << extra;
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Notification-set selection toolkit for dispatch under driver contention"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance (uniform or adversarial)");
  int gen_m = 1, gen_n = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out, hard_values;
  long long hard_target = 0;
  gen->add_option("--m", gen_m, "riders");
  gen->add_option("--n", gen_n, "drivers");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--out", gen_out, "output path (default stdout)");
  gen->add_option("--hardness-values", hard_values, "comma-separated 3-partition integers; enables hardness mode");
  gen->add_option("--hardness-target", hard_target, "3-partition triple sum");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a valuation on one rider's set");
  std::string eval_instance, eval_set, eval_protocol = "fa";
  int eval_rider = 0;
  eval->add_option("--instance", eval_instance, "instance JSON path")->required();
  eval->add_option("--rider", eval_rider, "rider index");
  eval->add_option("--set", eval_set, "comma-separated driver indices (empty for the empty set)");
  eval->add_option("--protocol", eval_protocol, "fa | ba | mnl");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo check of a valuation");
  std::string sim_instance, sim_set, sim_protocol = "fa";
  int sim_rider = 0;
  long sim_trials = 100000;
  std::uint64_t sim_seed = 0;
  sim->add_option("--instance", sim_instance, "instance JSON path")->required();
  sim->add_option("--rider", sim_rider, "rider index");
  sim->add_option("--set", sim_set, "comma-separated driver indices");
  sim->add_option("--protocol", sim_protocol, "fa | ba");
  sim->add_option("--trials", sim_trials, "trial count");
  sim->add_option("--seed", sim_seed, "simulation seed");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance with one algorithm");
  SolveArgs sargs;
  solve->add_option("--alg", sargs.alg,
                    "ed | fa-greedy | ba-greedy | fa-single-ptas | fa-multi | ba-homog | ba-cg | "
                    "ba-lp-bound | opt-fa | opt-ba")
      ->required();
  solve->add_option("--instance", sargs.instance_path, "instance JSON path")->required();
  solve->add_option("-o,--out", sargs.out_path, "assignment JSON output path");
  solve->add_option("--delta", sargs.delta, "pruning accuracy in (0,1)");
  solve->add_option("--eps", sargs.eps, "configuration-LP accuracy");
  solve->add_option("--seed", sargs.seed, "randomized-step seed");
  solve->add_option("--repetitions", sargs.repetitions, "rounding draws, best kept");
  solve->add_option("--steps", sargs.steps, "continuous-greedy ascent steps");
  solve->add_option("--oracle-budget", sargs.oracle_budget, "state cap for opt-fa/opt-ba");
  solve->add_option("--ed-weights", sargs.ed_weights, "pw (expected value) | w (raw score)");

  // bench
  auto* bench = app.add_subcommand("bench", "Batch experiment sweep; emits CSV");
  std::string bench_sizes = "3x9", bench_algs = "ed,fa-greedy,fa-multi,opt-fa", bench_out;
  BenchConfig bcfg;
  bool no_timing = false;
  std::string preset;
  bench->add_option("--sizes", bench_sizes, "comma-separated MxN sizes");
  bench->add_option("--algs", bench_algs, "comma-separated algorithms");
  bench->add_option("--count", bcfg.instances_per_size, "instances per size");
  bench->add_option("--seed", bcfg.seed, "sweep seed");
  bench->add_option("--eps", bcfg.eps, "configuration-LP accuracy");
  bench->add_option("--delta", bcfg.delta, "pruning accuracy");
  bench->add_option("--repetitions", bcfg.repetitions, "rounding draws per solve");
  bench->add_option("--oracle-budget", bcfg.oracle_budget, "brute-force state cap");
  bench->add_flag("--no-timing", no_timing, "write wall_ms as 0 for byte-stable output");
  bench->add_option("--preset", preset, "paper-s6-small: (3,9) x 1000 instances, every algorithm");
  bench->add_option("-o,--out", bench_out, "CSV output path (default stdout)");

  // hist
  auto* hist = app.add_subcommand("hist", "Bin per-algorithm ratios from a bench CSV");
  std::string hist_in, hist_out;
  HistogramSpec hspec;
  hist->add_option("--input", hist_in, "bench CSV path")->required();
  hist->add_option("--bins", hspec.bins, "bin count");
  hist->add_option("--lo", hspec.lo, "histogram lower edge");
  hist->add_option("--hi", hspec.hi, "histogram upper edge");
  hist->add_option("-o,--out", hist_out, "output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (gen->parsed()) {
      if (!hard_values.empty()) {
        ThreePartitionSpec spec;
        spec.values = parse_ll_list(hard_values);
        spec.target = hard_target;
        spec.triples = static_cast<int>(spec.values.size() / 3);
        HardnessInstance hard = gen_hardness(spec);
        emit(instance_to_json(hard.instance), gen_out, out);
        out << "welfare_threshold " << fmt(hard.welfare_threshold) << "\n";
      } else {
        emit(instance_to_json(gen_uniform(gen_m, gen_n, gen_seed)), gen_out, out);
      }
      return 0;
    }
    if (eval->parsed()) {
      const Instance inst = read_instance(eval_instance);
      require_valid(inst);
      if (eval_rider < 0 || eval_rider >= inst.m) throw std::runtime_error("rider index out of range");
      const auto set = parse_index_list(eval_set);
      out << fmt(value(DriverView::row_subset(inst, eval_rider, set), parse_kind(eval_protocol))) << "\n";
      return 0;
    }
    if (sim->parsed()) {
      const Instance inst = read_instance(sim_instance);
      require_valid(inst);
      if (sim_rider < 0 || sim_rider >= inst.m) throw std::runtime_error("rider index out of range");
      const auto set = parse_index_list(sim_set);
      SimResult r = simulate(DriverView::row_subset(inst, sim_rider, set), parse_kind(sim_protocol),
                             sim_trials, sim_seed);
      out << "mean " << fmt(r.mean) << "\n";
      out << "std_error " << fmt(r.std_error) << "\n";
      return 0;
    }
    if (solve->parsed()) return run_solve(sargs, out);
    if (bench->parsed()) {
      if (!preset.empty()) {
        if (preset != "paper-s6-small") throw std::runtime_error("unknown preset \"" + preset + "\"");
        bench_sizes = "3x9";
        bench_algs = "ed,ed-ba,fa-greedy,fa-multi,ba-greedy,ba-cg,opt-fa,opt-ba";
        bcfg.instances_per_size = 1000;
        bcfg.repetitions = 20;
      }
      bcfg.sizes = parse_sizes(bench_sizes);
      bcfg.algorithms = split_list(bench_algs);
      bcfg.record_timing = !no_timing;
      const auto records = bench_run(bcfg);
      std::ostringstream csv;
      write_csv(records, csv);
      emit(csv.str(), bench_out, out);
      return 0;
    }
    if (hist->parsed()) {
      std::ifstream in(hist_in);
      if (!in) throw std::runtime_error("cannot open " + hist_in);
      Histogram h = histogram_export(in, hspec);
      std::ostringstream text;
      write_histogram(h, text);
      if (h.skipped > 0) err << "skipped " << h.skipped << " malformed rows\n";
      emit(text.str(), hist_out, out);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand\n";
  return 1;
}

}  // namespace dispatchkit
