#include "boah/cli/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "boah/error.hpp"
#include "boah/space_json.hpp"
#include "boah/synthetic.hpp"

namespace boah::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void reject(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ScenarioError, field + ": " + what);
}

const std::set<std::string> kKeys = {"space",   "min_budget", "max_budget",       "budgets",   "eta",
                                     "iterations", "workers",  "seed",             "rho",       "gamma",
                                     "n_samples", "bandwidth_factor", "wall_clock_limit", "clock",
                                     "objective", "output_dir"};

double number(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc[key];
  if (!v.is_number()) reject(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) reject(key, "must be finite");
  return d;
}

std::uint64_t count(const json& doc, const char* key, std::uint64_t fallback, std::uint64_t min) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc[key];
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    reject(key, "expected a non-negative integer");
  const auto n = v.get<std::uint64_t>();
  if (n < min) reject(key, "must be >= " + std::to_string(min));
  return n;
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) reject("scenario", "expected a JSON object");
  for (const auto& [k, _] : doc.items())
    if (!kKeys.count(k)) reject(k, "unknown key");

  Scenario s;
  if (!doc.contains("objective")) reject("objective", "missing");
  const auto& obj = doc["objective"];
  if (!obj.is_object()) reject("objective", "expected an object");
  for (const auto& [k, _] : obj.items())
    if (k != "builtin" && k != "command" && k != "timeout") reject("objective." + k, "unknown key");
  if (obj.contains("builtin") == obj.contains("command"))
    reject("objective", "exactly one of \"builtin\" and \"command\" is required");
  if (obj.contains("builtin")) {
    if (!obj["builtin"].is_string()) reject("objective.builtin", "expected a string");
    s.objective.builtin = obj["builtin"].get<std::string>();
    if (obj.contains("timeout")) reject("objective.timeout", "only applies to commands");
  } else {
    const auto& cmd = obj["command"];
    if (!cmd.is_array() || cmd.empty()) reject("objective.command", "expected a non-empty array of strings");
    for (const auto& a : cmd) {
      if (!a.is_string()) reject("objective.command", "expected a non-empty array of strings");
      s.objective.command.push_back(a.get<std::string>());
    }
    s.objective.timeout = number(obj, "timeout", 0.0);
    if (s.objective.timeout < 0.0) reject("objective.timeout", "must be >= 0");
  }

  try {
    if (doc.contains("space")) {
      const auto& sp = doc["space"];
      if (sp.is_string()) {
        std::filesystem::path p = sp.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        s.space = std::make_shared<const DesignSpace>(load_space_file(p));
      } else if (sp.is_object()) {
        s.space = std::make_shared<const DesignSpace>(space_from_json(sp));
      } else {
        reject("space", "expected an object or a file path");
      }
    } else if (s.objective.builtin) {
      s.space = synthetic::make_builtin(*s.objective.builtin).space;
    } else {
      reject("space", "missing (required with a command objective)");
    }
    if (s.objective.builtin) {
      const auto builtin = synthetic::make_builtin(*s.objective.builtin);
      if (space_digest(*builtin.space) != space_digest(*s.space))
        reject("space", "does not match the space of builtin '" + *s.objective.builtin + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ScenarioError) throw;
    throw Error(ErrorKind::ScenarioError, std::string("space: ") + e.what());
  }

  auto& o = s.optimizer;
  o.b_min = number(doc, "min_budget", 1.0);
  o.b_max = number(doc, "max_budget", 9.0);
  if (!(o.b_min > 0.0)) reject("min_budget", "must be > 0");
  if (!(o.b_max > 0.0)) reject("max_budget", "must be > 0");
  if (o.b_min > o.b_max) reject("min_budget", "must be <= max_budget");
  if (doc.contains("budgets")) {
    const auto& b = doc["budgets"];
    if (!b.is_array()) reject("budgets", "expected an array of numbers");
    for (const auto& v : b) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) reject("budgets", "expected positive numbers");
      o.budget_set.push_back(v.get<double>());
    }
  }
  const auto eta = count(doc, "eta", 3, 2);
  if (eta > 1000) reject("eta", "must be <= 1000");
  o.eta = static_cast<int>(eta);
  o.n_iterations = count(doc, "iterations", 1, 1);
  o.n_workers = count(doc, "workers", 1, 1);
  o.seed = count(doc, "seed", 0, 0);
  o.rho = number(doc, "rho", 1.0 / 3.0);
  if (!(o.rho >= 0.0 && o.rho <= 1.0)) reject("rho", "must lie in [0, 1]");
  o.gamma = number(doc, "gamma", 0.15);
  if (!(o.gamma > 0.0 && o.gamma < 1.0)) reject("gamma", "must lie in (0, 1)");
  o.n_samples = count(doc, "n_samples", 64, 1);
  o.bandwidth_factor = number(doc, "bandwidth_factor", 3.0);
  if (!(o.bandwidth_factor > 0.0)) reject("bandwidth_factor", "must be > 0");
  if (doc.contains("wall_clock_limit") && !doc["wall_clock_limit"].is_null()) {
    o.wall_clock_limit = number(doc, "wall_clock_limit", 0.0);
    if (!(*o.wall_clock_limit > 0.0)) reject("wall_clock_limit", "must be > 0");
  }
  if (doc.contains("clock")) {
    const auto& c = doc["clock"];
    if (c == "logical") o.clock = ClockMode::logical;
    else if (c == "wall") o.clock = ClockMode::wall;
    else reject("clock", "expected \"logical\" or \"wall\"");
  }
  try {
    o.validate();
  } catch (const Error& e) {
    const std::string field = e.kind() == ErrorKind::IllegalBudgets ? "budgets" : "scenario";
    reject(field, e.what());
  }

  std::filesystem::path out = "boah-output";
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty())
      reject("output_dir", "expected a non-empty path");
    out = doc["output_dir"].get<std::string>();
  }
  s.output_dir = out.is_relative() ? (base_dir / out).lexically_normal() : out;
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ScenarioError, "scenario: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ScenarioError, std::string("scenario: invalid JSON: ") + e.what());
  }
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_scenario(doc, std::filesystem::absolute(base));
}

ordered_json scenario_to_json(const Scenario& s) {
  const auto& o = s.optimizer;
  ordered_json doc;
  doc["space"] = space_to_json(*s.space);
  doc["min_budget"] = o.b_min;
  doc["max_budget"] = o.b_max;
  if (!o.budget_set.empty()) doc["budgets"] = o.budget_set;
  doc["eta"] = o.eta;
  doc["iterations"] = o.n_iterations;
  doc["workers"] = o.n_workers;
  doc["seed"] = o.seed;
  doc["rho"] = o.rho;
  doc["gamma"] = o.gamma;
  doc["n_samples"] = o.n_samples;
  doc["bandwidth_factor"] = o.bandwidth_factor;
  doc["wall_clock_limit"] = o.wall_clock_limit ? ordered_json(*o.wall_clock_limit) : ordered_json();
  doc["clock"] = o.clock == ClockMode::wall ? "wall" : "logical";
  ordered_json obj;
  if (s.objective.builtin) {
    obj["builtin"] = *s.objective.builtin;
  } else {
    obj["command"] = s.objective.command;
    obj["timeout"] = s.objective.timeout;
  }
  doc["objective"] = obj;
  doc["output_dir"] = s.output_dir.string();
  return doc;
}

Objective make_objective(const Scenario& s) {
  if (s.objective.builtin) return synthetic::make_builtin(*s.objective.builtin).objective;
  return make_command_objective(
      s.space, {s.objective.command,
                std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(s.objective.timeout * 1000.0)))});
}

}  // namespace boah::cli
