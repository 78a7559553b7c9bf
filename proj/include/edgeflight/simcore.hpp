#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgeflight/config.hpp"
#include "edgeflight/planner.hpp"
#include "edgeflight/radiomap.hpp"
#include "edgeflight/scenario.hpp"
#include "edgeflight/worldmap.hpp"

namespace edgeflight {

struct Metrics {
  double flight_distance_m = 0.0;
  double flight_duration_s = 0.0;
  double avg_uplink_capacity_bps = 0.0;  // time-weighted over ticks
  double nlos_distance_ratio = 0.0;      // from ground-truth link state
  bool stuck = false;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// One tick: state at the start of the tick and the speed flown during it.
struct LogRecord {
  double time_s = 0.0;
  Vec3 position;
  double speed_mps = 0.0;
  LinkState true_state = LinkState::LoS;
  LinkState est_state = LinkState::AssumedLoS;
  double uplink_bps = 0.0;
  double downlink_sinr = 0.0;  // linear
  ProcessingMode mode = ProcessingMode::Remote;
  double speed_limit_mps = 0.0;  // governor limit implied by this tick's update rate

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

using TrajectoryLog = std::vector<LogRecord>;

struct EpisodeResult {
  PlannerKind kind = PlannerKind::Ecaaf;
  Metrics metrics;
  TrajectoryLog log;
  RadioMap radio_map;
  ExploredMap explored;
  std::size_t replans = 0;
};

/// Closed-loop mission: per tick, true link budget -> offload mode and update rate
/// -> sensing and radio-map update at the frame cadence -> CSI correction ->
/// replanning when due -> motion at min(planned speed, governor limit).
EpisodeResult run_episode(const Scenario& sc, PlannerKind kind, const SimulationConfig& cfg);

struct EpisodeRow {
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  PlannerKind kind = PlannerKind::Ecaaf;
  Metrics metrics;
};

struct KindAggregate {
  PlannerKind kind = PlannerKind::Ecaaf;
  std::size_t episodes = 0;
  std::size_t stuck = 0;
  double total_distance_m = 0.0;
  double total_duration_s = 0.0;
  double mean_distance_m = 0.0;
  double mean_duration_s = 0.0;
  double mean_uplink_capacity_bps = 0.0;
  double mean_nlos_ratio = 0.0;
};

struct BatchResult {
  std::vector<EpisodeRow> rows;  // ordered by (episode, kind order)
  std::vector<KindAggregate> aggregates;
  std::vector<TrajectoryLog> logs;  // parallel to rows when kept
};

struct BatchOptions {
  std::size_t episodes = 20;
  std::vector<PlannerKind> kinds = {PlannerKind::Baseline, PlannerKind::Ecaaf, PlannerKind::GlobeMap};
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  bool keep_logs = false;
};

/// Scenario seed for episode i; reseeds deterministically when placement fails.
Scenario batch_scenario(const SimulationConfig& cfg, std::uint64_t master_seed, std::size_t episode,
                        std::uint64_t* used_seed = nullptr);

/// n fresh scenarios, every kind flown on each. Episodes run concurrently; rows and
/// aggregates are ordered by episode index and are independent of thread count.
BatchResult run_batch(const SimulationConfig& cfg, const BatchOptions& opt);

std::vector<KindAggregate> aggregate(const std::vector<EpisodeRow>& rows, const std::vector<PlannerKind>& kinds);

}  // namespace edgeflight
