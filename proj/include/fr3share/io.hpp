#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fr3share/scenario.hpp"

namespace fr3share {

/// Parses a JSON scenario. Unknown keys and wrong types raise ConfigError;
/// missing keys keep their defaults.
ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, every field present).
std::string config_to_json(const ScenarioConfig& cfg);
/// FNV-1a 64-bit hash of the canonical JSON, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

std::string records_csv(const std::vector<SlotRecord>& records);
std::string summary_json(const RunSummary& s);
std::string states_csv(const std::vector<std::vector<SatelliteState>>& states);
std::string gain_map_csv(const GainMap& map);
std::string utility_curve_csv(const std::vector<UtilityPoint>& curve);
/// Per-link complex entries as [re, im] pairs.
std::string channel_set_json(const ChannelSet& cs);

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string mode;
  std::vector<std::string> outputs;
  double wall_clock_s = 0.0;
  int threads = 1;
};

std::string manifest_json(const RunManifest& m);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fr3share
