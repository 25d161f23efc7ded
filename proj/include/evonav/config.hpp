#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evonav/evolution.hpp"

namespace evonav {

// Aggregated runtime configuration. Every field has a sensible default, so a
// config file only needs to mention what it overrides.
struct AppConfig {
  ArenaSpec arena;
  RobotSpec robot;
  CameraSpec camera;
  int hidden_units = 8;
  TrialConfig trial;
  EvolutionConfig evolution;
  std::vector<double> sweep_fovs;                 // default: 0..180 in 2 degree steps
  int sweep_replicates = 5;
  std::optional<std::uint64_t> sweep_base_seed;   // set only when the file names one
};

[[nodiscard]] AppConfig default_config();

// Strict parse: unknown keys, wrong types, and out-of-range values all throw
// ConfigError naming the offending field.
[[nodiscard]] AppConfig parse_config(const std::string& json_text);

[[nodiscard]] AppConfig load_config_file(const std::string& path);

void validate_config(const AppConfig& config);

// Effective-settings snapshot, written into run manifests.
[[nodiscard]] nlohmann::json config_to_json(const AppConfig& config);

[[nodiscard]] ScenarioConfig scenario_from(const AppConfig& config);

}  // namespace evonav
