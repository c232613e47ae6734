#pragma once

// JSON scenario files: parsing with field-named errors and a lossless echo.

#include <string>

#include "json.hpp"

#include "coverage/simulate.hpp"

namespace coverage {

/// Parses a scenario document. Throws ConfigError naming the offending field.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Fully explicit document that parses back to an identical config.
nlohmann::json config_to_json(const ScenarioConfig& config);

}  // namespace coverage
