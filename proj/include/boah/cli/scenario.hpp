#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boah/design_space.hpp"
#include "boah/objective.hpp"
#include "boah/optimizer.hpp"
#include "json.hpp"

namespace boah::cli {

struct ObjectiveSpec {
  std::optional<std::string> builtin;
  std::vector<std::string> command;
  double timeout = 0.0;  // seconds; 0 = none
};

/// A fully resolved optimization scenario. Every optional field of the
/// input document has been filled in.
struct Scenario {
  std::shared_ptr<const DesignSpace> space;
  OptimizerConfig optimizer;
  ObjectiveSpec objective;
  std::filesystem::path output_dir;
};

/// Parses a scenario document. Relative paths (space file, output_dir) are
/// resolved against `base_dir`. Throws ScenarioError naming the offending
/// field, or the design-space error of an invalid space.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical document; parse_scenario(scenario_to_json(s)) == s.
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

/// The callable the scenario names. Builtins must match the scenario space.
Objective make_objective(const Scenario& scenario);

}  // namespace boah::cli
