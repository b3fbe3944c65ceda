#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "fanetkm/engine.hpp"

namespace fanetkm::cli {

using ScenarioOrSweep = std::variant<engine::ScenarioConfig, engine::SweepSpec>;

/// Reads a JSON scenario file. A file with "area_lengths" describes a sweep,
/// anything else a single run. Unknown fields are rejected at every level.
/// Throws ConfigError with kind MissingFile, MalformedSyntax, UnknownField
/// or InvalidValue.
ScenarioOrSweep parse_scenario(const std::filesystem::path& path);
ScenarioOrSweep parse_scenario_text(std::string_view text);
ScenarioOrSweep parse_scenario_json(const nlohmann::json& doc);

/// Applies the fields present in `doc` on top of `cfg` (no sweep fields).
void apply_overrides(const nlohmann::json& doc, engine::ScenarioConfig& cfg);

/// Canonical form: every field spelled out, accepted by parse_scenario_json.
nlohmann::json to_json(const engine::ScenarioConfig& cfg);
nlohmann::json to_json(const engine::SweepSpec& spec);

/// Human-readable defaults table for --help.
std::string defaults_help();

}  // namespace fanetkm::cli
