#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edgeflight/config.hpp"
#include "edgeflight/errors.hpp"
#include "edgeflight/export.hpp"
#include "edgeflight/gridio.hpp"
#include "edgeflight/simcore.hpp"

using namespace edgeflight;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::path(EDGEFLIGHT_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("config round-trips through JSON and files") {
  SimulationConfig cfg;
  cfg.plan.nlos_penalty_weight = 0.75;
  cfg.scenario.rng_seed = 18446744073709551615ULL;
  cfg.radiomap.sticky_nlos = false;
  CHECK(config_to_json(config_from_json(config_to_json(cfg))) == config_to_json(cfg));
  const fs::path p = tmp_dir("cfg") / "c.json";
  save_config(cfg, p);
  const SimulationConfig back = load_config(p);
  CHECK(config_to_json(back) == config_to_json(cfg));
  CHECK(config_digest(back) == config_digest(cfg));
  CHECK(config_digest(cfg).size() == 16);
  CHECK(config_digest(cfg) != config_digest(SimulationConfig{}));
}

TEST_CASE("partial configs keep defaults") {
  const auto cfg = config_from_json(nlohmann::json::parse(R"({"sensor": {"range_m": 80}})"));
  CHECK(cfg.sensor.range_m == 80.0);
  CHECK(cfg.sensor.fov_deg == 120.0);
  CHECK(config_to_json(config_from_json(nlohmann::json::object())) == config_to_json(SimulationConfig{}));
}

TEST_CASE("bad configs raise ConfigError") {
  using nlohmann::json;
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"sensr": {}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"sensor": {"range": 3}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"sensor": {"range_m": "far"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"sensor": {"fov_deg": 400}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"scenario": {"n_bs": 2.5}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"scenario": {"rng_seed": -1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"plan": {"horizon_s": 0.5}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse("[]")), ConfigError);
  CHECK_THROWS_AS(load_config(tmp_dir("missing") / "nope.json"), ConfigError);
  const fs::path broken = tmp_dir("broken") / "b.json";
  std::ofstream(broken) << "{ not json";
  CHECK_THROWS_AS(load_config(broken), ConfigError);
  CHECK_THROWS_AS(preset("hilly"), ConfigError);
}

TEST_CASE("height and explored grids round-trip") {
  ScenarioConfig sc;
  sc.rng_seed = 31;
  const HeightField h = generate_city(sc);
  const Provenance prov{"abc", 31};
  std::stringstream ss;
  write_height_grid(ss, h, prov);
  CHECK(ss.str().rfind(prov.header_line(), 0) == 0);
  CHECK(read_height_grid(ss) == h);

  ExploredMap m(h.frame());
  sense(h, m, {100.0, 100.0, 50.0}, 45.0, SensorModel{});
  std::stringstream es;
  write_explored_grid(es, m, prov);
  CHECK(read_explored_grid(es) == m);

  std::stringstream bad("grid 2 2 5 -1\n0 0\n0\n");
  CHECK_THROWS_AS(read_height_grid(bad), ConfigError);
}

TEST_CASE("scenario files round-trip") {
  ScenarioConfig sc;
  sc.rng_seed = 12;
  const Scenario s = make_scenario(sc);
  const fs::path dir = tmp_dir("scen");
  write_scenario(dir, s, Provenance{"x", 12});
  CHECK(read_scenario(dir) == s);
}

TEST_CASE("numbers print in shortest round-trip form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(15.0) == "15");
  for (double v : {1.0 / 3.0, 84.49445, 1e-17, 123456789.125}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("CSV exports carry provenance and the documented columns") {
  const Provenance prov{"0123456789abcdef", 9};
  CHECK(prov.header_line() == "# edgeflight 0.1.0 config_digest=0123456789abcdef seed=9");
  std::vector<EpisodeRow> rows{{0, 9, PlannerKind::Ecaaf, Metrics{300.0, 40.0, 12.5e6, 0.25, false}}};
  std::stringstream m;
  write_metrics_csv(m, rows, prov);
  std::string line;
  std::getline(m, line);
  CHECK(line == prov.header_line());
  std::getline(m, line);
  CHECK(line ==
        "episode,scenario_seed,planner,flight_distance_m,flight_duration_s,avg_uplink_capacity_mbps,"
        "nlos_distance_ratio,stuck");
  std::getline(m, line);
  CHECK(line == "0,9,ECAAF,300,40,12.5,0.25,0");

  std::stringstream t;
  LogRecord r;
  r.time_s = 0.1;
  r.position = {1.0, 2.0, 50.0};
  write_trajectory_csv(t, {r}, prov);
  std::getline(t, line);
  std::getline(t, line);
  CHECK(line.rfind("time_s,x_m,y_m,z_m,speed_mps,true_state,est_state", 0) == 0);

  std::stringstream a;
  write_aggregate_csv(a, aggregate(rows, {PlannerKind::Ecaaf}), prov);
  std::getline(a, line);
  std::getline(a, line);
  CHECK(line.rfind("planner,episodes,total_flight_distance_m,total_flight_duration_s,avg_uplink_capacity_mbps,"
                   "nlos_distance_ratio",
                   0) == 0);
}

TEST_CASE("radio-map slice has gain and state grids") {
  ScenarioConfig sc;
  const Scenario s = make_scenario(sc);
  const ExploredMap m = ExploredMap::fully_known(s.truth);
  RadioMap rm(s.truth.frame(), s.serving(), 50.0, ChannelParams{});
  std::stringstream out;
  write_radiomap_slice(out, rm, m, Provenance{"d", 1});
  std::string line;
  std::getline(out, line);
  std::getline(out, line);
  CHECK(line.rfind("radiomap 80 80 5", 0) == 0);
  int rows = 0;
  while (std::getline(out, line)) ++rows;
  CHECK(rows >= 160);
}

}
