#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rocq/core_types.hpp"
#include "rocq/ingest.hpp"
#include "rocq/montecarlo.hpp"
#include "rocq/risk.hpp"
#include "rocq/synthcampaign.hpp"

namespace rocq {

// JSON schemas for every file the pipeline reads or writes. Parsers reject
// unknown fields with a named-field error and report invariant violations
// with full field paths; all of that surfaces as ValidationError.

nlohmann::json scenario_to_json(const ScenarioConfig& scenario);
nlohmann::json simulation_to_json(const SimulationConfig& sim);
nlohmann::json result_to_json(const SimulationResult& result,
                              bool include_samples = true);
nlohmann::json mapping_to_json(const ProbeMapping& mapping);
nlohmann::json campaign_to_json(const CampaignSpec& spec);

ScenarioConfig scenario_from_json_text(std::string_view text);
SimulationConfig simulation_from_json_text(std::string_view text,
                                           std::uint64_t default_seed = 42);
SimulationResult result_from_json_text(std::string_view text);
ProbeMapping mapping_from_json_text(std::string_view text);
CampaignSpec campaign_from_json_text(std::string_view text,
                                     std::uint64_t default_seed = 42);

// File loaders: IoError when the file cannot be read, ValidationError for
// malformed JSON or schema/invariant violations.
ScenarioConfig load_scenario_file(const std::filesystem::path& path);
SimulationConfig load_simulation_file(const std::filesystem::path& path,
                                      std::uint64_t default_seed = 42);
SimulationResult load_result_file(const std::filesystem::path& path);
ProbeMapping load_mapping_file(const std::filesystem::path& path);
CampaignSpec load_campaign_file(const std::filesystem::path& path,
                                std::uint64_t default_seed = 42);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view bytes);

// "fnv1a64:<16 hex digits>" digest of a byte string, for provenance stamps.
std::string provenance_digest(std::string_view bytes);

}  // namespace rocq
