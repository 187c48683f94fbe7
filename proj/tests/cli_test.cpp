#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dispatchkit/instance.hpp"
#include "doctest.h"

using namespace dispatchkit;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("cli: gen writes a valid instance and exits 0") {
  const std::string path = temp_path("dk_cli_gen.json");
  const CliRun r = run({"gen", "--m", "4", "--n", "12", "--seed", "7", "-o", path});
  CHECK(r.code == 0);
  const Instance inst = read_instance(path);
  CHECK(inst.m == 4);
  CHECK(inst.n == 12);
  CHECK(validate(inst).empty());
  std::filesystem::remove(path);
}

TEST_CASE("cli: eval prints the first-accept value") {
  const std::string path = temp_path("dk_cli_eval.json");
  std::ofstream(path) << R"({"m":1,"n":3,"weights":[[1.0,0.2,1.0]],"probs":[[0.9,0.9,0.5]]})";
  const CliRun r = run({"eval", "--instance", path, "--rider", "0", "--set", "0,2", "--protocol", "fa"});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(0.95).epsilon(1e-12));
  std::filesystem::remove(path);
}

TEST_CASE("cli: solve on a heterogeneous instance with ba-homog exits 2") {
  const std::string path = temp_path("dk_cli_het.json");
  std::ofstream(path) << R"({"m":1,"n":2,"weights":[[1.0,0.5]],"probs":[[0.9,0.5]]})";
  const CliRun r = run({"solve", "--alg", "ba-homog", "--instance", path});
  CHECK(r.code == 2);
  CHECK(r.err.find("homogeneous") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("cli: unknown flags exit 1 with a usage message") {
  const CliRun r = run({"gen", "--frobnicate"});
  CHECK(r.code == 1);
  CHECK(!r.err.empty());
}

TEST_CASE("cli: help exits 0") {
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: gen/solve/hist round trip") {
  const std::string inst_path = temp_path("dk_cli_rt.json");
  const std::string csv_path = temp_path("dk_cli_rt.csv");
  const std::string hist_path = temp_path("dk_cli_rt_hist.csv");
  CHECK(run({"gen", "--m", "2", "--n", "4", "--seed", "3", "-o", inst_path}).code == 0);

  const CliRun solved = run({"solve", "--alg", "ed", "--instance", inst_path});
  CHECK(solved.code == 0);
  CHECK(solved.out.find("welfare ") != std::string::npos);
  const Assignment assignment = parse_assignment(solved.out.substr(0, solved.out.find("welfare ")));
  CHECK(validate(assignment, 2, 4).empty());

  const CliRun bench = run({"bench", "--sizes", "2x4", "--algs", "ed,fa-greedy", "--count", "4", "--seed",
                            "5", "--no-timing", "-o", csv_path});
  CHECK(bench.code == 0);
  const CliRun hist = run({"hist", "--input", csv_path, "--bins", "10", "-o", hist_path});
  CHECK(hist.code == 0);
  std::ifstream check(hist_path);
  std::string header;
  std::getline(check, header);
  CHECK(header == "algorithm,protocol,bin_lo,bin_hi,count");

  std::filesystem::remove(inst_path);
  std::filesystem::remove(csv_path);
  std::filesystem::remove(hist_path);
}

TEST_CASE("cli: hardness generation prints the welfare threshold") {
  const std::string path = temp_path("dk_cli_hard.json");
  const CliRun r = run({"gen", "--hardness-values", "1,1,1", "--hardness-target", "3", "-o", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("welfare_threshold 0.875") != std::string::npos);
  const Instance inst = read_instance(path);
  CHECK(inst.m == 1);
  CHECK(inst.n == 3);
  std::filesystem::remove(path);
}

TEST_CASE("cli: simulate reports mean and standard error") {
  const std::string path = temp_path("dk_cli_sim.json");
  std::ofstream(path) << R"({"m":1,"n":2,"weights":[[1.0,0.2]],"probs":[[0.9,0.9]]})";
  const CliRun r = run({"simulate", "--instance", path, "--rider", "0", "--set", "0,1", "--trials",
                        "200000", "--seed", "3", "--protocol", "fa"});
  CHECK(r.code == 0);
  std::istringstream out(r.out);
  std::string key;
  double mean = 0.0, se = 0.0;
  out >> key >> mean;
  CHECK(key == "mean");
  out >> key >> se;
  CHECK(key == "std_error");
  CHECK(std::abs(mean - 0.594) <= 4.0 * se);
  std::filesystem::remove(path);
}

TEST_CASE("cli: solve fa-multi reports the bound and certification") {
  const std::string path = temp_path("dk_cli_multi.json");
  CHECK(run({"gen", "--m", "2", "--n", "5", "--seed", "11", "-o", path}).code == 0);
  const CliRun r = run({"solve", "--alg", "fa-multi", "--instance", path, "--eps", "0.05", "--delta", "0.1",
                        "--seed", "1", "--repetitions", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("welfare ") != std::string::npos);
  CHECK(r.out.find("lp_bound ") != std::string::npos);
  CHECK(r.out.find("certified ") != std::string::npos);
  std::filesystem::remove(path);
}
