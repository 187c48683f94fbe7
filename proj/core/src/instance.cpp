#include "dispatchkit/instance.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dispatchkit/rng.hpp"
#include "json.hpp"

namespace dispatchkit {

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> errors;
  if (inst.m < 1) errors.push_back("m must be >= 1, got " + std::to_string(inst.m));
  if (inst.n < 1) errors.push_back("n must be >= 1, got " + std::to_string(inst.n));
  if (inst.m < 1 || inst.n < 1) return errors;
  const std::size_t expected = static_cast<std::size_t>(inst.m) * inst.n;
  if (inst.weights.size() != expected)
    errors.push_back("weights has " + std::to_string(inst.weights.size()) + " entries, expected " +
                     std::to_string(inst.m) + "x" + std::to_string(inst.n));
  if (inst.probs.size() != expected)
    errors.push_back("probs has " + std::to_string(inst.probs.size()) + " entries, expected " +
                     std::to_string(inst.m) + "x" + std::to_string(inst.n));
  if (!errors.empty()) return errors;
  for (int i = 0; i < inst.m; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      if (!in_unit_interval(inst.weight(i, j)))
        errors.push_back("weight out of [0,1] at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (!in_unit_interval(inst.prob(i, j)))
        errors.push_back("prob out of [0,1] at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  return errors;
}

std::vector<std::string> validate(const Assignment& assignment, int m, int n) {
  std::vector<std::string> errors;
  if (static_cast<int>(assignment.sets.size()) != m)
    errors.push_back("assignment has " + std::to_string(assignment.sets.size()) + " sets, expected " +
                     std::to_string(m));
  std::vector<int> owner(static_cast<std::size_t>(std::max(n, 0)), -1);
  for (std::size_t i = 0; i < assignment.sets.size(); ++i) {
    for (int j : assignment.sets[i]) {
      if (j < 0 || j >= n) {
        errors.push_back("driver index " + std::to_string(j) + " out of [0," + std::to_string(n) + ")");
        continue;
      }
      if (owner[j] >= 0)
        errors.push_back("driver " + std::to_string(j) + " assigned to riders " + std::to_string(owner[j]) +
                         " and " + std::to_string(i));
      else
        owner[j] = static_cast<int>(i);
    }
  }
  return errors;
}

void require_valid(const Instance& inst) {
  auto errors = validate(inst);
  if (errors.empty()) return;
  std::string joined = "invalid instance:";
  for (const auto& e : errors) joined += "\n  " + e;
  throw std::invalid_argument(joined);
}

Instance gen_uniform(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_uniform: m and n must be >= 1");
  Instance inst;
  inst.m = m;
  inst.n = n;
  const std::size_t count = static_cast<std::size_t>(m) * n;
  inst.weights.resize(count);
  inst.probs.resize(count);
  SplitMix64 rng(seed);
  for (auto& w : inst.weights) w = rng.next_unit();
  for (auto& p : inst.probs) p = rng.next_unit();
  return inst;
}

std::vector<std::string> validate(const ThreePartitionSpec& spec) {
  std::vector<std::string> errors;
  if (spec.triples < 1) errors.push_back("triples must be >= 1");
  if (spec.target < 1) errors.push_back("target must be >= 1");
  if (spec.values.size() != static_cast<std::size_t>(3 * spec.triples))
    errors.push_back("expected " + std::to_string(3 * spec.triples) + " values, got " +
                     std::to_string(spec.values.size()));
  long long sum = 0;
  for (std::size_t j = 0; j < spec.values.size(); ++j) {
    long long a = spec.values[j];
    if (a < 1) errors.push_back("value " + std::to_string(j) + " must be positive");
    // 1 - 2^-a must be an exact double.
    if (a > 52) errors.push_back("value " + std::to_string(j) + " exceeds 52; dyadic probability not exact");
    if (4 * a <= spec.target || 2 * a >= spec.target)
      errors.push_back("value " + std::to_string(j) + " violates target/4 < a < target/2");
    sum += a;
  }
  if (spec.values.size() == static_cast<std::size_t>(3 * spec.triples) &&
      sum != spec.target * static_cast<long long>(spec.triples))
    errors.push_back("values sum to " + std::to_string(sum) + ", expected triples*target = " +
                     std::to_string(spec.target * spec.triples));
  return errors;
}

HardnessInstance gen_hardness(const ThreePartitionSpec& spec) {
  auto errors = validate(spec);
  if (!errors.empty()) {
    std::string joined = "invalid 3-partition spec:";
    for (const auto& e : errors) joined += "\n  " + e;
    throw std::invalid_argument(joined);
  }
  HardnessInstance out;
  out.instance.m = spec.triples;
  out.instance.n = static_cast<int>(spec.values.size());
  const std::size_t count = static_cast<std::size_t>(out.instance.m) * out.instance.n;
  out.instance.weights.assign(count, 1.0);
  out.instance.probs.resize(count);
  for (int i = 0; i < out.instance.m; ++i)
    for (int j = 0; j < out.instance.n; ++j)
      out.instance.prob(i, j) = 1.0 - std::ldexp(1.0, -static_cast<int>(spec.values[j]));
  out.welfare_threshold =
      static_cast<double>(spec.triples) * (1.0 - std::ldexp(1.0, -static_cast<int>(spec.target)));
  return out;
}

namespace {

using nlohmann::json;

json matrix_to_json(const std::vector<double>& flat, int rows, int cols) {
  json out = json::array();
  for (int i = 0; i < rows; ++i) {
    json row = json::array();
    for (int j = 0; j < cols; ++j) row.push_back(flat[static_cast<std::size_t>(i) * cols + j]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> matrix_from_json(const json& j, int rows, int cols, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw std::runtime_error(std::string("schema error: \"") + name + "\" must have " + std::to_string(rows) +
                             " rows");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw std::runtime_error(std::string("schema error: \"") + name + "\" row " + std::to_string(i) +
                               " must have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number())
        throw std::runtime_error(std::string("schema error: \"") + name + "\" entry (" + std::to_string(i) +
                                 "," + std::to_string(c) + ") is not a number");
      flat.push_back(row[c].get<double>());
    }
  }
  return flat;
}

json parse_json_or_throw(const std::string& text, const std::string& context) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(context + ": parse error: " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json j = parse_json_or_throw(json_text, "instance");
  for (const char* key : {"m", "n", "weights", "probs"})
    if (!j.contains(key)) throw std::runtime_error(std::string("schema error: missing \"") + key + "\" key");
  Instance inst;
  if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
    throw std::runtime_error("schema error: \"m\" and \"n\" must be integers");
  inst.m = j["m"].get<int>();
  inst.n = j["n"].get<int>();
  if (inst.m < 1 || inst.n < 1) throw std::runtime_error("schema error: m and n must be >= 1");
  inst.weights = matrix_from_json(j["weights"], inst.m, inst.n, "weights");
  inst.probs = matrix_from_json(j["probs"], inst.m, inst.n, "probs");
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["m"] = inst.m;
  j["n"] = inst.n;
  j["weights"] = matrix_to_json(inst.weights, inst.m, inst.n);
  j["probs"] = matrix_to_json(inst.probs, inst.m, inst.n);
  return j.dump(2) + "\n";
}

Instance read_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_instance(const Instance& inst, const std::string& path) { write_file(path, instance_to_json(inst)); }

Assignment parse_assignment(const std::string& json_text) {
  json j = parse_json_or_throw(json_text, "assignment");
  if (!j.contains("sets")) throw std::runtime_error("schema error: missing \"sets\" key");
  const json& sets = j["sets"];
  if (!sets.is_array()) throw std::runtime_error("schema error: \"sets\" must be an array");
  Assignment out;
  for (const auto& row : sets) {
    if (!row.is_array()) throw std::runtime_error("schema error: each set must be an array");
    std::vector<int> set;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw std::runtime_error("schema error: driver indices must be integers");
      set.push_back(v.get<int>());
    }
    out.sets.push_back(std::move(set));
  }
  return out;
}

std::string assignment_to_json(const Assignment& assignment) {
  json j;
  j["sets"] = json::array();
  for (const auto& set : assignment.sets) j["sets"].push_back(set);
  return j.dump(2) + "\n";
}

Assignment read_assignment(const std::string& path) {
  try {
    return parse_assignment(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_assignment(const Assignment& assignment, const std::string& path) {
  write_file(path, assignment_to_json(assignment));
}

}  // namespace dispatchkit
