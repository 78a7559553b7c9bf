#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "edgeflight/channel.hpp"
#include "edgeflight/offload.hpp"
#include "edgeflight/planner.hpp"
#include "edgeflight/radiomap.hpp"
#include "edgeflight/scenario.hpp"
#include "edgeflight/worldmap.hpp"

namespace edgeflight {

struct SimConfig {
  double tick_s = 0.1;
  double timeout_s = 600.0;

  void validate() const;
};

/// Every tunable of a run, one section per module.
struct SimulationConfig {
  ScenarioConfig scenario;
  SensorModel sensor;
  ChannelParams channel;
  OffloadConfig offload;
  PlanConfig plan;
  RadioMapConfig radiomap;
  SimConfig sim;

  void validate() const;
};

/// Parses a JSON config. Every key is optional and defaults as in the structs;
/// unknown sections or keys are rejected. Throws ConfigError.
SimulationConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimulationConfig& cfg);

SimulationConfig load_config(const std::filesystem::path& path);
void save_config(const SimulationConfig& cfg, const std::filesystem::path& path);

/// FNV-1a 64 over the canonical JSON dump, as 16 hex digits.
std::string config_digest(const SimulationConfig& cfg);

/// Built-in presets: "default" and "flat" (no buildings,
/// link budget that saturates the speed governor, 320 m mission).
SimulationConfig preset(const std::string& name);

}  // namespace edgeflight
