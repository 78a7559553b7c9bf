#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "edgeflight/channel.hpp"
#include "edgeflight/geometry.hpp"
#include "edgeflight/grid.hpp"
#include "edgeflight/link.hpp"
#include "edgeflight/offload.hpp"
#include "edgeflight/radiomap.hpp"
#include "edgeflight/scenario.hpp"
#include "edgeflight/worldmap.hpp"

namespace edgeflight {

struct PlanConfig {
  double horizon_s = 10.0;
  double replan_period_s = 1.0;
  double nlos_penalty_weight = 2.0;   // extra cost per second flown in NLoS
  int safety_margin_cells = 1;
  bool commit_within_sensed = true;
  double interference_weight = 0.5;   // GlobeMap only
  double sample_tick_s = 0.1;
  // Score horizon candidates with the exact lattice cost-to-go instead of the
  // straight-line estimate.
  bool cost_to_go_terminal = true;

  void validate() const;
};

enum class PlannerKind { Ecaaf, Baseline, GlobeMap };

std::string_view to_string(PlannerKind k);
/// Accepts "ecaaf", "baseline", "globemap" (case-insensitive).
std::optional<PlannerKind> parse_planner_kind(std::string_view s);

struct UavState {
  Vec3 position;
  Vec3 velocity;
  double heading_deg = 0.0;
  ProcessingMode mode = ProcessingMode::Remote;
  double time_s = 0.0;
};

/// Per-cell planning attributes at cruise altitude.
struct CellLink {
  double speed_limit_mps = 0.0;
  double nlos = 0.0;                  // 1 if the planner believes the cell is NLoS
  double interference_penalty = 0.0;  // fraction of speed lost to downlink interference, [0, 1]
};

/// Ground-truth link attributes for every cell, built once per scenario.
class GlobalLinkTable {
 public:
  GlobalLinkTable(const Scenario& sc, const ChannelParams& p, const OffloadConfig& oc);

  const CellLink& at(CellIndex c) const { return links_[frame_.linear(c)]; }

 private:
  GridFrame frame_;
  std::vector<CellLink> links_;
};

/// Everything a planner may read. GlobeMap receives a fully known `explored` and `global`.
struct PlanInputs {
  const ExploredMap& explored;
  const RadioMap& radio_map;
  const Scenario& scenario;
  const ChannelParams& channel;
  const OffloadConfig& offload;
  const GlobalLinkTable* global = nullptr;
};

/// Speed limit and link beliefs for one cell, per planner kind:
///   Ecaaf    - radio-map gain (AssumedLoS as LoS), no interference.
///   Baseline - elevation-angle expected path loss, LoS-blind.
///   GlobeMap - ground truth including downlink interference.
CellLink cell_speed_limit(PlannerKind kind, CellIndex cell, const PlanInputs& in);

struct EdgeCost {
  double time_s = 0.0;
  double cost = 0.0;
};

/// Lattice cost model shared by the planner and any independent checker.
/// Per-cell links are computed on first use.
class CostField {
 public:
  using Provider = std::function<CellLink(CellIndex)>;

  CostField(GridFrame frame, Provider provider, std::vector<std::uint8_t> forbidden, Vec3 goal,
            double nlos_weight, double interference_weight, double heuristic_speed_mps);

  const GridFrame& frame() const { return frame_; }
  const CellLink& link(CellIndex c) const;
  bool forbidden(CellIndex c) const { return forbidden_[frame_.linear(c)] != 0; }
  CellIndex goal_cell() const { return goal_cell_; }
  const Vec3& goal() const { return goal_; }

  /// Cost of moving between 8-neighbours a -> b, or nullopt if the move is not
  /// allowed (target forbidden, diagonal cutting a forbidden corner, zero speed).
  /// time = length / min(limit(a), limit(b));
  /// cost = time * (1 + w_nlos * mean nlos + w_int * mean interference penalty).
  std::optional<EdgeCost> edge(CellIndex a, CellIndex b) const;

  /// Terminal cost of a horizon candidate; 0 on the goal cell. Either the straight-line
  /// distance to the goal at the heuristic speed, or, once enable_cost_to_go() ran,
  /// the exact lattice cost-to-go (infinite where the goal is unreachable).
  double heuristic(CellIndex c) const;

  void enable_cost_to_go();
  void disable_cost_to_go() { ctg_.clear(); }

 private:
  GridFrame frame_;
  Provider provider_;
  mutable std::vector<CellLink> cache_;
  mutable std::vector<std::uint8_t> cached_;
  std::vector<std::uint8_t> forbidden_;
  Vec3 goal_;
  CellIndex goal_cell_;
  double nlos_weight_;
  double interference_weight_;
  double heuristic_speed_;
  std::vector<double> ctg_;
};

/// Cells with known height >= altitude, dilated by `margin_cells` (Chebyshev).
std::vector<std::uint8_t> forbidden_mask(const ExploredMap& explored, double altitude_m, int margin_cells);

struct LatticePath {
  std::vector<CellIndex> cells;  // cells.front() is the start cell
  double cost = 0.0;             // accumulated edge cost
  double time_s = 0.0;           // accumulated edge time
  double objective = 0.0;        // cost + heuristic(cells.back())
};

/// Receding-horizon search. Labels (cost, time) are kept Pareto-optimal per cell;
/// a label is expanded only while its time is below the horizon. Candidates are
/// labels on the goal or at/after the horizon; the one minimising cost + heuristic
/// wins, ties to the lowest cell index. If no candidate exists, any non-start label
/// qualifies. Throws StuckError when nothing beyond the start is reachable.
LatticePath search_lattice(const CostField& field, CellIndex start, double horizon_s);

struct Waypoint {
  Vec3 position;
  double speed_mps = 0.0;  // speed on the piece leaving this waypoint
};

struct TrajectorySample {
  double time_s = 0.0;
  Vec3 position;
  double speed_mps = 0.0;
};

/// Committed motion: a polyline through cell centres with planned speeds, and its
/// time-sampled form at a fixed tick.
struct TrajectorySegment {
  std::vector<Waypoint> waypoints;
  std::vector<CellIndex> cells;  // cell of each waypoint after the first
  std::vector<TrajectorySample> samples;

  bool empty() const { return waypoints.size() < 2; }
};

struct PlanResult {
  TrajectorySegment committed;
  LatticePath path;                        // full planned lattice path
  std::optional<double> intended_heading;  // direction of the first planned move
};

/// One planning cycle from the UAV's current state.
PlanResult plan_step(PlannerKind kind, const UavState& state, const PlanInputs& in, const PlanConfig& pc);

/// Builds the cost field the planner uses for `kind` from `start`. The heuristic
/// speed is the believed speed limit of the start cell, capped at v_max.
CostField make_cost_field(PlannerKind kind, const PlanInputs& in, const PlanConfig& pc, CellIndex start);

/// Samples a waypoint polyline at a fixed tick; the last sample is the final waypoint.
std::vector<TrajectorySample> sample_polyline(const std::vector<Waypoint>& waypoints, double tick_s);

/// True if any remaining committed cell is now forbidden under `explored`.
bool segment_invalidated(const TrajectorySegment& seg, std::size_t next_waypoint, const ExploredMap& explored,
                         double altitude_m, int margin_cells);

/// Periodic replanning, or immediately when the committed segment was invalidated.
bool replan_due(double now_s, double last_plan_s, const PlanConfig& pc, bool invalidated = false);

}  // namespace edgeflight
