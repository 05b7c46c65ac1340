#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "uavnet/scenario.hpp"

namespace uavnet {

inline constexpr const char* kToolName = "uavnet";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or invalid scenario. The message names the file line or the dotted field path.
class ScenarioError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Full tree with every default filled in. Terrain keys irrelevant to the terrain kind are omitted.
nlohmann::json scenario_to_json(const Scenario& s);

/// Missing keys take their defaults; unknown keys and wrongly typed values are errors.
/// Does not check cross-field invariants (see Scenario::validate).
Scenario scenario_from_json(const nlohmann::json& doc);

/// Parses TOML or JSON text (chosen by `format`, "toml" or "json") without validating.
Scenario parse_scenario(const std::string& text, const std::string& format, const std::string& source = "<input>");

/// Reads, applies defaults and validates against the built environment. Relative terrain paths
/// resolve against the scenario file's directory. Throws ScenarioError.
Scenario load_scenario(const std::string& path);

std::string scenario_to_toml(const Scenario& s);

/// Writes TOML or JSON according to the file extension.
void save_scenario(const Scenario& s, const std::string& path);

/// 64-bit FNV-1a of the canonical JSON form (plus terrain file bytes), as 16 hex digits.
std::string scenario_hash(const Scenario& s);

} // namespace uavnet
