#include "edgeflight/planner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "edgeflight/errors.hpp"

namespace edgeflight {

void PlanConfig::validate() const {
  if (!(replan_period_s > 0.0)) throw ConfigError("plan.replan_period_s must be positive");
  if (!(horizon_s >= replan_period_s)) throw ConfigError("plan.horizon_s must be >= plan.replan_period_s");
  if (!(nlos_penalty_weight >= 0.0)) throw ConfigError("plan.nlos_penalty_weight must be >= 0");
  if (!(interference_weight >= 0.0)) throw ConfigError("plan.interference_weight must be >= 0");
  if (safety_margin_cells < 0) throw ConfigError("plan.safety_margin_cells must be >= 0");
  if (!(sample_tick_s > 0.0)) throw ConfigError("plan.sample_tick_s must be positive");
}

std::string_view to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::Ecaaf: return "ECAAF";
    case PlannerKind::Baseline: return "Baseline";
    case PlannerKind::GlobeMap: return "GlobeMap";
  }
  return "?";
}

std::optional<PlannerKind> parse_planner_kind(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ecaaf") return PlannerKind::Ecaaf;
  if (lower == "baseline") return PlannerKind::Baseline;
  if (lower == "globemap") return PlannerKind::GlobeMap;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-cell link beliefs

namespace {

double capacity_at(double tx_dbm, double pl_db, const ChannelParams& p) {
  const double snr = dbm_to_mw(received_power_dbm(tx_dbm, pl_db, 0.0, 0.0)) / dbm_to_mw(noise_power_dbm(p));
  return capacity_bps(snr, p.bandwidth_hz);
}

}  // namespace

GlobalLinkTable::GlobalLinkTable(const Scenario& sc, const ChannelParams& p, const OffloadConfig& oc)
    : frame_(sc.truth.frame()), links_(frame_.cell_count()) {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Vec3 pos = frame_.center(frame_.from_linear(i), sc.uav_altitude_m);
    const LinkSnapshot s = true_link(sc, pos, p);
    const double limit = govern(s.uplink_bps, s.downlink_bps, oc).speed_limit_mps;
    const double dl_clean = capacity_bps(s.uplink_snr * dbm_to_mw(p.bs_tx_power_dbm - p.uav_tx_power_dbm), p.bandwidth_hz);
    const double limit_clean = govern(s.uplink_bps, dl_clean, oc).speed_limit_mps;
    CellLink& l = links_[i];
    l.speed_limit_mps = limit;
    l.nlos = s.state == LinkState::NLoS ? 1.0 : 0.0;
    l.interference_penalty = limit_clean > 0.0 ? std::clamp(1.0 - limit / limit_clean, 0.0, 1.0) : 0.0;
  }
}

CellLink cell_speed_limit(PlannerKind kind, CellIndex cell, const PlanInputs& in) {
  const GridFrame& f = in.scenario.truth.frame();
  const Vec3 pos = f.center(cell, in.scenario.uav_altitude_m);
  CellLink l;
  switch (kind) {
    case PlannerKind::Ecaaf: {
      const VoxelKey k = in.radio_map.key_of(pos);
      const RadioEntry e = in.radio_map.evaluate(k, in.explored);
      const double pl = -e.gain_db;
      l.speed_limit_mps = govern(capacity_at(in.channel.uav_tx_power_dbm, pl, in.channel),
                                 capacity_at(in.channel.bs_tx_power_dbm, pl, in.channel), in.offload)
                              .speed_limit_mps;
      l.nlos = e.state == LinkState::NLoS ? 1.0 : 0.0;
      break;
    }
    case PlannerKind::Baseline: {
      const Vec3& bs = in.scenario.serving();
      const double pl = expected_path_loss_db(distance(pos, bs), elevation_deg(pos, bs), in.channel);
      l.speed_limit_mps = govern(capacity_at(in.channel.uav_tx_power_dbm, pl, in.channel),
                                 capacity_at(in.channel.bs_tx_power_dbm, pl, in.channel), in.offload)
                              .speed_limit_mps;
      break;
    }
    case PlannerKind::GlobeMap: {
      if (in.global) return in.global->at(cell);
      return GlobalLinkTable(in.scenario, in.channel, in.offload).at(cell);
    }
  }
  return l;
}

// ---------------------------------------------------------------------------
// Cost field

CostField::CostField(GridFrame frame, Provider provider, std::vector<std::uint8_t> forbidden, Vec3 goal,
                     double nlos_weight, double interference_weight, double heuristic_speed_mps)
    : frame_(frame),
      provider_(std::move(provider)),
      cache_(frame.cell_count()),
      cached_(frame.cell_count(), 0),
      forbidden_(std::move(forbidden)),
      goal_(goal),
      goal_cell_(frame.cell_of(goal.x, goal.y)),
      nlos_weight_(nlos_weight),
      interference_weight_(interference_weight),
      heuristic_speed_(heuristic_speed_mps) {
  if (forbidden_.size() != frame_.cell_count()) throw std::invalid_argument("CostField: mask size mismatch");
  if (!(heuristic_speed_ > 0.0)) throw std::invalid_argument("CostField: heuristic speed must be positive");
}

void CostField::enable_cost_to_go() {
  // Backward Dijkstra from the goal over edges c -> n.
  const double inf = std::numeric_limits<double>::infinity();
  ctg_.assign(frame_.cell_count(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const std::size_t g = frame_.linear(goal_cell_);
  ctg_[g] = 0.0;
  open.push({0.0, g});
  while (!open.empty()) {
    const auto [d, ni] = open.top();
    open.pop();
    if (d > ctg_[ni]) continue;
    const CellIndex n = frame_.from_linear(ni);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const CellIndex c{n.ix + dx, n.iy + dy};
        if ((dx == 0 && dy == 0) || !frame_.in_bounds(c)) continue;
        const auto e = edge(c, n);
        if (!e) continue;
        const std::size_t ci = frame_.linear(c);
        if (d + e->cost < ctg_[ci]) {
          ctg_[ci] = d + e->cost;
          open.push({ctg_[ci], ci});
        }
      }
    }
  }
}

const CellLink& CostField::link(CellIndex c) const {
  const std::size_t i = frame_.linear(c);
  if (!cached_[i]) {
    cache_[i] = provider_(c);
    cached_[i] = 1;
  }
  return cache_[i];
}

std::optional<EdgeCost> CostField::edge(CellIndex a, CellIndex b) const {
  if (!frame_.in_bounds(b) || forbidden(b)) return std::nullopt;
  const int ddx = b.ix - a.ix;
  const int ddy = b.iy - a.iy;
  if (std::abs(ddx) > 1 || std::abs(ddy) > 1 || (ddx == 0 && ddy == 0)) return std::nullopt;
  const bool diagonal = ddx != 0 && ddy != 0;
  if (diagonal && (forbidden({a.ix + ddx, a.iy}) || forbidden({a.ix, a.iy + ddy}))) return std::nullopt;

  const CellLink& la = link(a);
  const CellLink& lb = link(b);
  const double v = std::min(la.speed_limit_mps, lb.speed_limit_mps);
  if (!(v > 0.0)) return std::nullopt;
  const double length = frame_.cell_size_m * (diagonal ? std::sqrt(2.0) : 1.0);
  EdgeCost e;
  e.time_s = length / v;
  e.cost = e.time_s * (1.0 + nlos_weight_ * 0.5 * (la.nlos + lb.nlos) +
                       interference_weight_ * 0.5 * (la.interference_penalty + lb.interference_penalty));
  return e;
}

double CostField::heuristic(CellIndex c) const {
  if (c == goal_cell_) return 0.0;
  if (!ctg_.empty()) return ctg_[frame_.linear(c)];
  return horizontal_distance(frame_.center(c), goal_) / heuristic_speed_;
}

std::vector<std::uint8_t> forbidden_mask(const ExploredMap& explored, double altitude_m, int margin_cells) {
  const GridFrame& f = explored.frame();
  std::vector<std::uint8_t> obstacle(f.cell_count(), 0);
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      const auto h = explored.height({ix, iy});
      if (h && *h >= altitude_m) obstacle[f.linear({ix, iy})] = 1;
    }
  }
  if (margin_cells == 0) return obstacle;
  std::vector<std::uint8_t> out(f.cell_count(), 0);
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      if (!obstacle[f.linear({ix, iy})]) continue;
      for (int dy = -margin_cells; dy <= margin_cells; ++dy) {
        for (int dx = -margin_cells; dx <= margin_cells; ++dx) {
          const CellIndex n{ix + dx, iy + dy};
          if (f.in_bounds(n)) out[f.linear(n)] = 1;
        }
      }
    }
  }
  return out;
}

CostField make_cost_field(PlannerKind kind, const PlanInputs& in, const PlanConfig& pc, CellIndex start) {
  const double lambda = kind == PlannerKind::Baseline ? 0.0 : pc.nlos_penalty_weight;
  const double mu = kind == PlannerKind::GlobeMap ? pc.interference_weight : 0.0;
  // Remaining distance is priced at the speed believed for the current cell.
  double v_h = std::min(cell_speed_limit(kind, start, in).speed_limit_mps, in.offload.v_max_mps);
  if (!(v_h > 0.0)) v_h = in.offload.v_max_mps;
  CostField field(
      in.explored.frame(), [kind, &in](CellIndex c) { return cell_speed_limit(kind, c, in); },
      forbidden_mask(in.explored, in.scenario.uav_altitude_m, pc.safety_margin_cells), in.scenario.goal, lambda, mu,
      v_h);
  if (pc.cost_to_go_terminal) {
    field.enable_cost_to_go();
    // Goal sealed off under current beliefs: fall back to the straight-line estimate.
    if (std::isinf(field.heuristic(start))) field.disable_cost_to_go();
  }
  return field;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Label {
  double cost;
  double time;
  std::size_t cell;
  long parent;
};

struct QueueItem {
  double cost;
  double time;
  std::size_t cell;
  long parent;

  // min-heap on (cost, time, cell, parent)
  bool operator<(const QueueItem& o) const {
    if (cost != o.cost) return cost > o.cost;
    if (time != o.time) return time > o.time;
    if (cell != o.cell) return cell > o.cell;
    return parent > o.parent;
  }
};

constexpr int kNeighbours[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

}  // namespace

LatticePath search_lattice(const CostField& field, CellIndex start, double horizon_s) {
  const GridFrame& f = field.frame();
  if (!f.in_bounds(start)) throw std::out_of_range("search_lattice: start outside the map");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best_time(f.cell_count(), inf);
  std::vector<Label> labels;
  std::priority_queue<QueueItem> open;
  open.push({0.0, 0.0, f.linear(start), -1});

  long best_candidate = -1;
  double best_j = inf;
  auto consider = [&](long idx) {
    const Label& l = labels[static_cast<std::size_t>(idx)];
    const double j = l.cost + field.heuristic(f.from_linear(l.cell));
    if (best_candidate < 0 || j < best_j ||
        (j == best_j && l.cell < labels[static_cast<std::size_t>(best_candidate)].cell)) {
      best_candidate = idx;
      best_j = j;
    }
  };

  while (!open.empty()) {
    const QueueItem it = open.top();
    open.pop();
    if (it.time >= best_time[it.cell]) continue;  // dominated by a settled label
    best_time[it.cell] = it.time;
    const long idx = static_cast<long>(labels.size());
    labels.push_back({it.cost, it.time, it.cell, it.parent});

    const CellIndex c = f.from_linear(it.cell);
    if (c == field.goal_cell() || it.time >= horizon_s) {
      consider(idx);
      continue;
    }
    for (const auto& d : kNeighbours) {
      const CellIndex n{c.ix + d[0], c.iy + d[1]};
      const auto e = field.edge(c, n);
      if (!e) continue;
      const double t = it.time + e->time_s;
      const std::size_t ni = f.linear(n);
      if (t >= best_time[ni]) continue;
      open.push({it.cost + e->cost, t, ni, idx});
    }
  }

  if (best_candidate < 0) {
    // Reachable region exhausted before the horizon without reaching the goal.
    for (long i = 1; i < static_cast<long>(labels.size()); ++i) consider(i);
  }
  if (best_candidate < 0) throw StuckError("no admissible move from the current cell");

  LatticePath path;
  const Label& end = labels[static_cast<std::size_t>(best_candidate)];
  path.cost = end.cost;
  path.time_s = end.time;
  path.objective = best_j;
  for (long i = best_candidate; i >= 0; i = labels[static_cast<std::size_t>(i)].parent) {
    path.cells.push_back(f.from_linear(labels[static_cast<std::size_t>(i)].cell));
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

// ---------------------------------------------------------------------------
// Segments

std::vector<TrajectorySample> sample_polyline(const std::vector<Waypoint>& wps, double tick_s) {
  std::vector<TrajectorySample> out;
  if (wps.empty()) return out;
  out.push_back({0.0, wps.front().position, 0.0});
  if (wps.size() < 2) return out;

  std::size_t piece = 0;
  Vec3 pos = wps.front().position;
  double time = 0.0;
  while (piece + 1 < wps.size()) {
    double budget = tick_s;
    double travelled = 0.0;
    while (budget > 0.0 && piece + 1 < wps.size()) {
      const Vec3 target = wps[piece + 1].position;
      const double v = wps[piece].speed_mps;
      const double left = distance(pos, target);
      if (!(v > 0.0)) {
        piece = wps.size();  // cannot move; stop sampling
        break;
      }
      const double need = left / v;
      if (need <= budget) {
        pos = target;
        budget -= need;
        travelled += left;
        ++piece;
      } else {
        pos = pos + (target - pos) * (v * budget / left);
        travelled += v * budget;
        budget = 0.0;
      }
    }
    const double dt = tick_s - budget;
    if (dt <= 0.0) break;
    out.back().speed_mps = travelled / dt;
    time += dt;
    out.push_back({time, pos, 0.0});
  }
  return out;
}

PlanResult plan_step(PlannerKind kind, const UavState& state, const PlanInputs& in, const PlanConfig& pc) {
  const GridFrame& f = in.explored.frame();
  const double alt = in.scenario.uav_altitude_m;
  const CellIndex start = f.cell_of(state.position.x, state.position.y);
  const CostField field = make_cost_field(kind, in, pc, start);

  PlanResult r;
  r.path = search_lattice(field, start, pc.horizon_s);
  const auto& cells = r.path.cells;

  auto point_of = [&](CellIndex c) {
    return c == field.goal_cell() ? Vec3{in.scenario.goal.x, in.scenario.goal.y, alt} : f.center(c, alt);
  };

  // Full planned polyline.
  std::vector<Waypoint> wps;
  std::vector<CellIndex> wp_cells;
  const Vec3 here{state.position.x, state.position.y, alt};
  wps.push_back({here, 0.0});
  if (cells.size() == 1) {
    const Vec3 target = point_of(cells.front());
    if (distance(here, target) > 1e-9) {
      wps.front().speed_mps = field.link(cells.front()).speed_limit_mps;
      wps.push_back({target, 0.0});
      wp_cells.push_back(cells.front());
    }
  } else {
    for (std::size_t i = 1; i < cells.size(); ++i) {
      wps.back().speed_mps = std::min(field.link(cells[i - 1]).speed_limit_mps, field.link(cells[i]).speed_limit_mps);
      wps.push_back({point_of(cells[i]), 0.0});
      wp_cells.push_back(cells[i]);
    }
  }
  if (wps.size() >= 2) {
    const Vec3 d = wps[1].position - wps[0].position;
    if (d.horizontal_norm() > 1e-9) r.intended_heading = rad_to_deg(std::atan2(d.y, d.x));
  }

  // Commit only the prefix whose cells are sensed and free.
  std::size_t keep = wp_cells.size();
  if (pc.commit_within_sensed) {
    auto known_free = [&](CellIndex c) { return f.in_bounds(c) && in.explored.known(c) && !field.forbidden(c); };
    keep = 0;
    CellIndex prev = start;
    for (const CellIndex& c : wp_cells) {
      bool ok = c == start ? true : known_free(c);
      const int ddx = c.ix - prev.ix;
      const int ddy = c.iy - prev.iy;
      if (ok && ddx != 0 && ddy != 0) ok = known_free({prev.ix + ddx, prev.iy}) && known_free({prev.ix, prev.iy + ddy});
      if (!ok) break;
      ++keep;
      prev = c;
    }
  }
  wps.resize(keep + 1);
  wps.back().speed_mps = 0.0;
  wp_cells.resize(keep);

  r.committed.waypoints = std::move(wps);
  r.committed.cells = std::move(wp_cells);
  r.committed.samples = sample_polyline(r.committed.waypoints, pc.sample_tick_s);
  return r;
}

bool segment_invalidated(const TrajectorySegment& seg, std::size_t next_waypoint, const ExploredMap& explored,
                         double altitude_m, int margin_cells) {
  if (seg.empty()) return false;
  const GridFrame& f = explored.frame();
  auto forbidden = [&](CellIndex c) {
    for (int dy = -margin_cells; dy <= margin_cells; ++dy) {
      for (int dx = -margin_cells; dx <= margin_cells; ++dx) {
        const CellIndex n{c.ix + dx, c.iy + dy};
        if (!f.in_bounds(n)) continue;
        const auto h = explored.height(n);
        if (h && *h >= altitude_m) return true;
      }
    }
    return false;
  };
  // cells[i] is the cell of waypoint i + 1.
  for (std::size_t i = next_waypoint == 0 ? 0 : next_waypoint - 1; i < seg.cells.size(); ++i) {
    if (forbidden(seg.cells[i])) return true;
  }
  return false;
}

bool replan_due(double now_s, double last_plan_s, const PlanConfig& pc, bool invalidated) {
  if (invalidated) return true;
  return now_s - last_plan_s >= pc.replan_period_s - 1e-9;
}

}  // namespace edgeflight
