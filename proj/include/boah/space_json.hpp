#pragma once

#include <filesystem>
#include <string>

#include "boah/design_space.hpp"
#include "json.hpp"

namespace boah {

using ordered_json = nlohmann::ordered_json;

/// Parses the design-space document
///   {"hyperparameters": [{"name","type","lower","upper","log","choices","default"}...],
///    "conditions": [{"child","parent","values":[...]}...]}
/// Unknown keys are rejected. A missing "default" is materialized.
DesignSpace space_from_json(const nlohmann::json& doc);
DesignSpace load_space_file(const std::filesystem::path& path);

/// Canonical document with every default materialized; re-parsing it yields
/// an identical space.
ordered_json space_to_json(const DesignSpace& space);

/// Hex SHA-256 of the canonical document.
std::string space_digest(const DesignSpace& space);

/// {name: value|null} with choice labels as strings.
ordered_json config_values_to_json(const DesignSpace& space, const Configuration& config);
/// {name: bool}.
ordered_json config_active_to_json(const DesignSpace& space, const Configuration& config);
/// Inverse of config_values_to_json; null means INACTIVE. Throws
/// InvalidConfiguration on unknown names, missing names or illegal values.
Configuration config_from_json(const DesignSpace& space, const nlohmann::json& values);

/// Label stored for a JSON choice: strings verbatim, numbers by their JSON text.
std::string choice_label(const nlohmann::json& v);

}  // namespace boah
