#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "edgeflight/config.hpp"
#include "edgeflight/errors.hpp"
#include "edgeflight/export.hpp"
#include "edgeflight/gridio.hpp"
#include "edgeflight/simcore.hpp"

namespace edgeflight::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::string preset_name = "default";
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

struct Loaded {
  SimulationConfig cfg;
  std::uint64_t seed = 0;
  Provenance prov;
};

Loaded load(const Common& c) {
  Loaded l;
  l.cfg = c.config_path.empty() ? preset(c.preset_name) : load_config(c.config_path);
  l.cfg.validate();
  l.seed = c.seed.value_or(l.cfg.scenario.rng_seed);
  l.prov = {config_digest(l.cfg), l.seed};
  return l;
}

std::vector<PlannerKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<PlannerKind> kinds;
  for (const std::string& n : names) {
    const auto k = parse_planner_kind(n);
    if (!k) throw ConfigError(fmt::format("unknown planner '{}'", n));
    kinds.push_back(*k);
  }
  if (kinds.empty()) throw ConfigError("no planners selected");
  return kinds;
}

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot write '{}'", p.string()));
  return f;
}

std::string lower(std::string_view s) {
  std::string r(s);
  for (char& ch : r) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return r;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file (all keys optional)");
  cmd->add_option("--preset", c.preset_name, "built-in config when --config is absent: default, flat");
  cmd->add_option("--seed", c.seed, "master seed (defaults to scenario.rng_seed)");
  cmd->add_option("--out", c.out_dir, "output directory");
}

int cmd_generate(const Common& c, std::ostream& out) {
  const Loaded l = load(c);
  std::uint64_t scenario_seed = 0;
  const Scenario sc = batch_scenario(l.cfg, l.seed, 0, &scenario_seed);
  write_scenario(c.out_dir, sc, l.prov);
  ScenarioConfig used = l.cfg.scenario;
  used.rng_seed = scenario_seed;
  const CityStats st = city_stats(used, sc.truth);
  const double pct = st.building_count > 0 ? 100.0 * st.above_altitude_count / st.building_count : 0.0;
  out << fmt::format("map {}x{} m, {} buildings, {:.1f}% above {} m cruise altitude, mean height {:.2f} m\n",
                     sc.truth.frame().width_m(), sc.truth.frame().depth_m(), st.building_count, pct,
                     sc.uav_altitude_m, st.mean_height_m);
  out << fmt::format("start ({}, {}) goal ({}, {}) serving BS {}\n", sc.start.x, sc.start.y, sc.goal.x, sc.goal.y,
                     sc.serving_bs);
  return kOk;
}

struct Toggles {
  bool no_metrics = false;
  bool no_trajectory = false;
  bool no_radiomap = false;
};

int cmd_run(const Common& c, const std::vector<std::string>& planners, const Toggles& t, std::ostream& out) {
  const Loaded l = load(c);
  const std::vector<PlannerKind> kinds = parse_kinds(planners);
  std::uint64_t scenario_seed = 0;
  const Scenario sc = batch_scenario(l.cfg, l.seed, 0, &scenario_seed);
  const fs::path dir = c.out_dir;
  fs::create_directories(dir);

  std::vector<EpisodeRow> rows;
  bool stuck = false;
  for (PlannerKind k : kinds) {
    const EpisodeResult r = run_episode(sc, k, l.cfg);
    rows.push_back({0, scenario_seed, k, r.metrics});
    stuck = stuck || r.metrics.stuck;
    const std::string tag = lower(to_string(k));
    if (!t.no_trajectory) {
      auto f = open_out(dir / fmt::format("trajectory_{}.csv", tag));
      write_trajectory_csv(f, r.log, l.prov);
    }
    if (!t.no_radiomap) {
      auto f = open_out(dir / fmt::format("radiomap_{}.csv", tag));
      write_radiomap_slice(f, r.radio_map, r.explored, l.prov);
    }
    out << fmt::format("{:<9} distance {:8.1f} m  duration {:7.1f} s  uplink {:6.2f} Mbps  NLoS {:5.1f}%{}\n",
                       to_string(k), r.metrics.flight_distance_m, r.metrics.flight_duration_s,
                       r.metrics.avg_uplink_capacity_bps / 1e6, 100.0 * r.metrics.nlos_distance_ratio,
                       r.metrics.stuck ? "  STUCK" : "");
  }
  if (!t.no_metrics) {
    auto f = open_out(dir / "metrics.csv");
    write_metrics_csv(f, rows, l.prov);
  }
  return stuck ? kStuck : kOk;
}

int cmd_batch(const Common& c, const std::vector<std::string>& planners, std::size_t episodes, unsigned threads,
              bool trajectories, std::ostream& out) {
  const Loaded l = load(c);
  BatchOptions opt;
  opt.episodes = episodes;
  opt.kinds = parse_kinds(planners);
  opt.master_seed = l.seed;
  opt.threads = threads;
  opt.keep_logs = trajectories;
  const BatchResult br = run_batch(l.cfg, opt);

  const fs::path dir = c.out_dir;
  fs::create_directories(dir);
  {
    auto f = open_out(dir / "aggregate.csv");
    write_aggregate_csv(f, br.aggregates, l.prov);
  }
  {
    auto f = open_out(dir / "episodes.csv");
    write_metrics_csv(f, br.rows, l.prov);
  }
  if (trajectories) {
    for (std::size_t i = 0; i < br.rows.size(); ++i) {
      const EpisodeRow& r = br.rows[i];
      auto f = open_out(dir / "trajectories" / fmt::format("ep{:03}_{}.csv", r.episode, lower(to_string(r.kind))));
      write_trajectory_csv(f, br.logs[i], l.prov);
    }
  }
  out << fmt::format("{:<9} {:>5} {:>12} {:>12} {:>12} {:>9} {:>6}\n", "planner", "runs", "distance_m", "duration_s",
                     "uplink_Mbps", "NLoS_%", "stuck");
  for (const KindAggregate& a : br.aggregates) {
    out << fmt::format("{:<9} {:>5} {:>12.1f} {:>12.1f} {:>12.2f} {:>9.1f} {:>6}\n", to_string(a.kind), a.episodes,
                       a.total_distance_m, a.total_duration_s, a.mean_uplink_capacity_bps / 1e6,
                       100.0 * a.mean_nlos_ratio, a.stuck);
  }
  bool stuck = false;
  for (const KindAggregate& a : br.aggregates) stuck = stuck || a.stuck > 0;
  return stuck ? kStuck : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Connectivity-aware UAV flight simulator with edge offloading"};
  app.require_subcommand(1);

  Common gen_c;
  CLI::App* gen = app.add_subcommand("generate", "generate a city and mission");
  add_common(gen, gen_c);

  Common run_c;
  std::vector<std::string> run_planners{"baseline", "ecaaf", "globemap"};
  Toggles run_t;
  CLI::App* run_cmd = app.add_subcommand("run", "fly one scenario with each planner");
  add_common(run_cmd, run_c);
  run_cmd->add_option("--planners", run_planners, "planners to fly")->delimiter(',');
  run_cmd->add_flag("--no-metrics", run_t.no_metrics, "skip metrics.csv");
  run_cmd->add_flag("--no-trajectory", run_t.no_trajectory, "skip trajectory logs");
  run_cmd->add_flag("--no-radiomap", run_t.no_radiomap, "skip radio-map slices");

  Common batch_c;
  std::vector<std::string> batch_planners{"baseline", "ecaaf", "globemap"};
  std::size_t episodes = 20;
  unsigned threads = 0;
  bool trajectories = false;
  CLI::App* batch = app.add_subcommand("batch", "aggregate over fresh scenarios");
  add_common(batch, batch_c);
  batch->add_option("--planners", batch_planners, "planners to fly")->delimiter(',');
  batch->add_option("--episodes", episodes, "number of scenarios")->check(CLI::PositiveNumber);
  batch->add_option("--threads", threads, "worker threads (0: all cores)");
  batch->add_flag("--trajectories", trajectories, "write per-episode trajectory logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*gen) return cmd_generate(gen_c, out);
    if (*run_cmd) return cmd_run(run_c, run_planners, run_t, out);
    return cmd_batch(batch_c, batch_planners, episodes, threads, trajectories, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << '\n';
    return kScenarioError;
  } catch (const StuckError& e) {
    err << "stuck: " << e.what() << '\n';
    return kStuck;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace edgeflight::cli
