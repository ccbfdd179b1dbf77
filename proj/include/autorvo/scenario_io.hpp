#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "autorvo/simulator.hpp"
#include "json.hpp"

namespace autorvo::sim {

using Json = nlohmann::json;

/// `key=value` with a dotted key path into the scenario document
/// (e.g. `nav.weights.d=3`, `agents.0.goal=[10,0]`).
struct Override {
  std::string path;
  std::string value;
};

Override parse_override(std::string_view text);

/// Parses, fills defaults, applies overrides and validates. Throws ParseError
/// for malformed text and ValidationError for rule violations; messages start
/// with the offending path.
Scenario load_scenario(std::string_view text, std::span<const Override> overrides = {});
Scenario load_scenario_file(const std::filesystem::path& path,
                            std::span<const Override> overrides = {});

/// The document after defaults and overrides, before conversion.
Json effective_document(std::string_view text, std::span<const Override> overrides = {});

Json nav_to_json(const nav::NavConfig& cfg);

/// `base` with the keys of a partial `nav` object replaced; unknown keys are errors.
nav::NavConfig apply_nav_overrides(const nav::NavConfig& base, const Json& partial);
Json params_to_json(const dynamics::DynamicsParams& p);
Json agent_types_to_json(const std::map<AgentType, dynamics::DynamicsParams>& types);

/// Serializes a scenario (current agent states become initial states).
Json scenario_to_json(const Scenario& scenario);

/// Reference offset used when a shape does not declare one: the shape midpoint
/// for pedestrians, the front axle (wheelbase centered on the body) for vehicles.
Vec2 default_reference_offset(AgentType type, std::span<const geometry::Disk> disks,
                              double wheelbase);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace autorvo::sim
