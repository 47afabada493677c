#pragma once

#include <string>

#include "leotrack/scenario.hpp"

namespace leotrack {

// Reads a JSON scenario configuration. Every key is optional; omitted fields
// take the stock defaults. Unknown keys are rejected by name. Throws
// ConfigError with parse/field diagnostics.
ScenarioConfig load_config(const std::string& path);

// Same, from an in-memory JSON document (used for manifest replay).
ScenarioConfig config_from_json_text(const std::string& text);

// Serializes the fully resolved configuration as canonical JSON: reloading
// the output reproduces the same ScenarioConfig.
std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace leotrack
