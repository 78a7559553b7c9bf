#include "edgeflight/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "edgeflight/errors.hpp"

namespace edgeflight {

using nlohmann::json;

void SimConfig::validate() const {
  if (!(tick_s > 0.0)) throw ConfigError("sim.tick_s must be positive");
  if (!(timeout_s > tick_s)) throw ConfigError("sim.timeout_s must exceed sim.tick_s");
}

void SimulationConfig::validate() const {
  scenario.validate();
  sensor.validate();
  channel.validate();
  offload.validate();
  plan.validate();
  radiomap.validate();
  sim.validate();
  if (plan.replan_period_s < sim.tick_s) throw ConfigError("plan.replan_period_s must be at least sim.tick_s");
}

namespace {

// One visitor per section keeps the key list in a single place for both directions.
template <class C, class V>
void visit_scenario(C& c, V&& v) {
  v("map_width_m", c.map_width_m);
  v("map_depth_m", c.map_depth_m);
  v("cell_size_m", c.cell_size_m);
  v("rayleigh_scale_m", c.rayleigh_scale_m);
  v("building_footprint_m", c.building_footprint_m);
  v("street_width_m", c.street_width_m);
  v("n_bs", c.n_bs);
  v("bs_height_m", c.bs_height_m);
  v("uav_altitude_m", c.uav_altitude_m);
  v("endpoint_min_m", c.endpoint_min_m);
  v("endpoint_max_m", c.endpoint_max_m);
  v("endpoint_clearance_cells", c.endpoint_clearance_cells);
  v("rng_seed", c.rng_seed);
}

template <class C, class V>
void visit_sensor(C& c, V&& v) {
  v("fov_deg", c.fov_deg);
  v("range_m", c.range_m);
}

template <class C, class V>
void visit_channel(C& c, V&& v) {
  v("carrier_hz", c.carrier_hz);
  v("bandwidth_hz", c.bandwidth_hz);
  v("uav_tx_power_dbm", c.uav_tx_power_dbm);
  v("bs_tx_power_dbm", c.bs_tx_power_dbm);
  v("noise_figure_db", c.noise_figure_db);
  v("nlos_excess_db", c.nlos_excess_db);
  v("plos_a", c.plos_a);
  v("plos_b", c.plos_b);
}

template <class C, class V>
void visit_offload(C& c, V&& v) {
  v("frame_bits", c.frame_bits);
  v("frames_per_meter", c.frames_per_meter);
  v("feedback_bits", c.feedback_bits);
  v("remote_proc_s_per_frame", c.remote_proc_s_per_frame);
  v("local_fps", c.local_fps);
  v("v_max_mps", c.v_max_mps);
}

template <class C, class V>
void visit_plan(C& c, V&& v) {
  v("horizon_s", c.horizon_s);
  v("replan_period_s", c.replan_period_s);
  v("nlos_penalty_weight", c.nlos_penalty_weight);
  v("safety_margin_cells", c.safety_margin_cells);
  v("commit_within_sensed", c.commit_within_sensed);
  v("interference_weight", c.interference_weight);
  v("sample_tick_s", c.sample_tick_s);
  v("cost_to_go_terminal", c.cost_to_go_terminal);
}

template <class C, class V>
void visit_radiomap(C& c, V&& v) {
  v("sticky_nlos", c.sticky_nlos);
  v("update_margin_cells", c.update_margin_cells);
  v("extra_layers", c.extra_layers);
  v("layer_height_m", c.layer_height_m);
}

template <class C, class V>
void visit_sim(C& c, V&& v) {
  v("tick_s", c.tick_s);
  v("timeout_s", c.timeout_s);
}

template <class T>
void read_value(const json& j, const std::string& where, T& out) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw ConfigError(where + " must be a boolean");
    out = j.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (j.is_number_unsigned()) {
        out = j.get<T>();
      } else {
        const auto v = j.get<std::int64_t>();
        if (v < 0) throw ConfigError(where + " must be non-negative");
        out = static_cast<T>(v);
      }
    } else {
      out = j.get<T>();
    }
  } else {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
    out = j.get<T>();
  }
}

template <class C, class Visit>
void read_section(const json& root, const char* name, C& c, Visit visit) {
  if (!root.contains(name)) return;
  const json& sec = root.at(name);
  if (!sec.is_object()) throw ConfigError(fmt::format("section '{}' must be an object", name));
  std::set<std::string> known;
  visit(c, [&](const char* key, auto& field) {
    known.insert(key);
    if (sec.contains(key)) read_value(sec.at(key), fmt::format("{}.{}", name, key), field);
  });
  for (const auto& [key, value] : sec.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError(fmt::format("unknown key '{}.{}'", name, key));
  }
}

template <class C, class Visit>
json write_section(const C& c, Visit visit) {
  json sec = json::object();
  visit(c, [&](const char* key, const auto& field) { sec[key] = field; });
  return sec;
}

constexpr const char* kSections[] = {"scenario", "sensor", "channel", "offload", "plan", "radiomap", "sim"};

}  // namespace

SimulationConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* s : kSections) ok = ok || key == s;
    if (!ok) throw ConfigError(fmt::format("unknown section '{}'", key));
  }
  SimulationConfig cfg;
  read_section(j, "scenario", cfg.scenario, [](auto& c, auto&& v) { visit_scenario(c, v); });
  read_section(j, "sensor", cfg.sensor, [](auto& c, auto&& v) { visit_sensor(c, v); });
  read_section(j, "channel", cfg.channel, [](auto& c, auto&& v) { visit_channel(c, v); });
  read_section(j, "offload", cfg.offload, [](auto& c, auto&& v) { visit_offload(c, v); });
  read_section(j, "plan", cfg.plan, [](auto& c, auto&& v) { visit_plan(c, v); });
  read_section(j, "radiomap", cfg.radiomap, [](auto& c, auto&& v) { visit_radiomap(c, v); });
  read_section(j, "sim", cfg.sim, [](auto& c, auto&& v) { visit_sim(c, v); });
  cfg.validate();
  return cfg;
}

json config_to_json(const SimulationConfig& cfg) {
  json j = json::object();
  j["scenario"] = write_section(cfg.scenario, [](auto& c, auto&& v) { visit_scenario(c, v); });
  j["sensor"] = write_section(cfg.sensor, [](auto& c, auto&& v) { visit_sensor(c, v); });
  j["channel"] = write_section(cfg.channel, [](auto& c, auto&& v) { visit_channel(c, v); });
  j["offload"] = write_section(cfg.offload, [](auto& c, auto&& v) { visit_offload(c, v); });
  j["plan"] = write_section(cfg.plan, [](auto& c, auto&& v) { visit_plan(c, v); });
  j["radiomap"] = write_section(cfg.radiomap, [](auto& c, auto&& v) { visit_radiomap(c, v); });
  j["sim"] = write_section(cfg.sim, [](auto& c, auto&& v) { visit_sim(c, v); });
  return j;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("malformed config file '{}': {}", path.string(), e.what()));
  }
  return config_from_json(j);
}

void save_config(const SimulationConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write config file '{}'", path.string()));
  out << config_to_json(cfg).dump(2) << '\n';
}

std::string config_digest(const SimulationConfig& cfg) {
  const std::string canon = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

SimulationConfig preset(const std::string& name) {
  SimulationConfig cfg;
  if (name == "default") return cfg;
  if (name == "flat") {
    // Empty city, one cell and a wide channel: every cell is LoS, nothing
    // interferes, and the governor saturates at v_max everywhere.
    cfg.scenario.rayleigh_scale_m = 0.0;
    cfg.scenario.n_bs = 1;
    cfg.scenario.endpoint_min_m = 320.0;
    cfg.scenario.endpoint_max_m = 320.0;
    cfg.channel.bandwidth_hz = 20.0e6;
    return cfg;
  }
  throw ConfigError(fmt::format("unknown preset '{}'", name));
}

}  // namespace edgeflight
