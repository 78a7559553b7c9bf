#include "edgeflight/simcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "edgeflight/errors.hpp"
#include "edgeflight/link.hpp"
#include "edgeflight/offload.hpp"
#include "edgeflight/rng.hpp"

namespace edgeflight {

namespace {

constexpr double kArriveTol = 1e-6;

struct Motion {
  double moved_m = 0.0;
  Vec3 last_direction;
};

// Advances along the committed polyline for `dt` seconds. Each piece is flown at
// min(planned speed, governor limit).
Motion advance(Vec3& pos, const TrajectorySegment& seg, std::size_t& next_wp, double v_limit, double dt) {
  Motion m;
  double remaining = dt;
  while (remaining > 0.0 && next_wp < seg.waypoints.size()) {
    const Vec3 target = seg.waypoints[next_wp].position;
    const double v = std::min(seg.waypoints[next_wp - 1].speed_mps, v_limit);
    const double d = distance(pos, target);
    if (d <= 1e-12) {
      pos = target;
      ++next_wp;
      continue;
    }
    if (!(v > 0.0)) break;
    m.last_direction = target - pos;
    if (d <= v * remaining) {
      remaining -= d / v;
      m.moved_m += d;
      pos = target;
      ++next_wp;
    } else {
      const double step = v * remaining;
      pos = pos + (target - pos) * (step / d);
      m.moved_m += step;
      remaining = 0.0;
    }
  }
  return m;
}

}  // namespace

EpisodeResult run_episode(const Scenario& sc, PlannerKind kind, const SimulationConfig& cfg) {
  const GridFrame frame = sc.truth.frame();
  const double alt = sc.uav_altitude_m;
  const double dt = cfg.sim.tick_s;

  ExploredMap explored = kind == PlannerKind::GlobeMap ? ExploredMap::fully_known(sc.truth) : ExploredMap(frame);
  RadioMap rm(frame, sc.serving(), alt, cfg.channel, cfg.radiomap);
  std::optional<GlobalLinkTable> global;
  if (kind == PlannerKind::GlobeMap) global.emplace(sc, cfg.channel, cfg.offload);
  const PlanInputs inputs{explored, rm, sc, cfg.channel, cfg.offload, global ? &*global : nullptr};

  UavState st;
  st.position = {sc.start.x, sc.start.y, alt};
  {
    const Vec3 d = sc.goal - sc.start;
    st.heading_deg = d.horizontal_norm() > 0.0 ? rad_to_deg(std::atan2(d.y, d.x)) : 0.0;
  }
  const Vec3 goal{sc.goal.x, sc.goal.y, alt};
  const double update_radius = cfg.sensor.range_m + cfg.radiomap.update_margin_cells * frame.cell_size_m;

  TrajectorySegment seg;
  std::size_t next_wp = 0;
  double last_plan = -std::numeric_limits<double>::infinity();
  double frame_credit = 1.0;  // a frame is processed on the first tick
  std::size_t replans = 0;

  Metrics m;
  TrajectoryLog log;
  double nlos_m = 0.0;
  double capacity_integral = 0.0;
  bool arrived = distance(st.position, goal) <= kArriveTol;
  std::size_t tick = 0;

  const auto max_ticks = static_cast<std::size_t>(std::ceil(cfg.sim.timeout_s / dt - 1e-9));
  while (!arrived) {
    if (tick >= max_ticks) {
      m.stuck = true;
      break;
    }
    const double t = static_cast<double>(tick) * dt;
    st.time_s = t;

    const LinkSnapshot link = true_link(sc, st.position, cfg.channel);
    const Governor gov = govern(link.uplink_bps, link.downlink_bps, cfg.offload);
    st.mode = gov.choice.mode;

    frame_credit += gov.choice.effective_fps * dt;
    if (tick == 0 || frame_credit >= 1.0) {
      frame_credit -= std::floor(frame_credit);
      sense(sc.truth, explored, st.position, st.heading_deg, cfg.sensor);
      update_radio_map(rm, explored, st.position, update_radius);
    }

    const VoxelKey here = rm.key_of(st.position);
    const LinkState est = rm.evaluate(here, explored).state;
    csi_correct(rm, st.position, link.state);

    const bool exhausted = next_wp >= seg.waypoints.size();
    const bool invalid = segment_invalidated(seg, next_wp, explored, alt, cfg.plan.safety_margin_cells);
    if (exhausted || replan_due(t, last_plan, cfg.plan, invalid)) {
      PlanResult pr;
      try {
        pr = plan_step(kind, st, inputs, cfg.plan);
      } catch (const StuckError&) {
        m.stuck = true;
        break;
      }
      seg = std::move(pr.committed);
      next_wp = 1;
      last_plan = t;
      ++replans;
      if (seg.empty() && pr.intended_heading) st.heading_deg = *pr.intended_heading;
    }

    const Vec3 before = st.position;
    const Motion mv = advance(st.position, seg, next_wp, gov.speed_limit_mps, dt);
    if (mv.moved_m > 0.0 && mv.last_direction.horizontal_norm() > 0.0) {
      st.heading_deg = rad_to_deg(std::atan2(mv.last_direction.y, mv.last_direction.x));
    }
    st.velocity = (st.position - before) * (1.0 / dt);

    LogRecord rec;
    rec.time_s = t;
    rec.position = before;
    rec.speed_mps = mv.moved_m / dt;
    rec.true_state = link.state;
    rec.est_state = est;
    rec.uplink_bps = link.uplink_bps;
    rec.downlink_sinr = link.downlink_sinr;
    rec.mode = gov.choice.mode;
    rec.speed_limit_mps = gov.speed_limit_mps;
    log.push_back(rec);

    m.flight_distance_m += mv.moved_m;
    if (link.state == LinkState::NLoS) nlos_m += mv.moved_m;
    capacity_integral += link.uplink_bps * dt;
    ++tick;
    arrived = distance(st.position, goal) <= kArriveTol;
  }

  m.flight_duration_s = static_cast<double>(tick) * dt;
  m.avg_uplink_capacity_bps = tick > 0 ? capacity_integral / m.flight_duration_s : 0.0;
  m.nlos_distance_ratio = m.flight_distance_m > 0.0 ? nlos_m / m.flight_distance_m : 0.0;
  return EpisodeResult{kind, m, std::move(log), std::move(rm), std::move(explored), replans};
}

Scenario batch_scenario(const SimulationConfig& cfg, std::uint64_t master_seed, std::size_t episode,
                        std::uint64_t* used_seed) {
  std::uint64_t seed = episode_seed(master_seed, episode);
  std::uint64_t state = seed;
  constexpr int kAttempts = 32;
  for (int attempt = 0;; ++attempt) {
    ScenarioConfig sc = cfg.scenario;
    sc.rng_seed = seed;
    try {
      Scenario s = make_scenario(sc);
      if (used_seed) *used_seed = seed;
      return s;
    } catch (const ScenarioError&) {
      if (attempt + 1 >= kAttempts) throw;
      seed = splitmix64(state);
    }
  }
}

std::vector<KindAggregate> aggregate(const std::vector<EpisodeRow>& rows, const std::vector<PlannerKind>& kinds) {
  std::vector<KindAggregate> out;
  for (PlannerKind k : kinds) {
    KindAggregate a;
    a.kind = k;
    double cap = 0.0;
    double nlos = 0.0;
    for (const EpisodeRow& r : rows) {
      if (r.kind != k) continue;
      ++a.episodes;
      if (r.metrics.stuck) ++a.stuck;
      a.total_distance_m += r.metrics.flight_distance_m;
      a.total_duration_s += r.metrics.flight_duration_s;
      cap += r.metrics.avg_uplink_capacity_bps;
      nlos += r.metrics.nlos_distance_ratio;
    }
    if (a.episodes > 0) {
      const double n = static_cast<double>(a.episodes);
      a.mean_distance_m = a.total_distance_m / n;
      a.mean_duration_s = a.total_duration_s / n;
      a.mean_uplink_capacity_bps = cap / n;
      a.mean_nlos_ratio = nlos / n;
    }
    out.push_back(a);
  }
  return out;
}

BatchResult run_batch(const SimulationConfig& cfg, const BatchOptions& opt) {
  cfg.validate();
  const std::size_t nk = opt.kinds.size();
  std::vector<EpisodeRow> rows(opt.episodes * nk);
  std::vector<TrajectoryLog> logs(opt.keep_logs ? rows.size() : 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= opt.episodes || failed.load()) return;
      try {
        std::uint64_t seed = 0;
        const Scenario sc = batch_scenario(cfg, opt.master_seed, i, &seed);
        for (std::size_t k = 0; k < nk; ++k) {
          EpisodeResult er = run_episode(sc, opt.kinds[k], cfg);
          rows[i * nk + k] = {i, seed, opt.kinds[k], er.metrics};
          if (opt.keep_logs) logs[i * nk + k] = std::move(er.log);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, opt.episodes)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  BatchResult br;
  br.aggregates = aggregate(rows, opt.kinds);
  br.rows = std::move(rows);
  br.logs = std::move(logs);
  return br;
}

}  // namespace edgeflight
