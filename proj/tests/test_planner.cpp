#include <doctest.h>

#include <cmath>
#include <limits>

#include "cases.hpp"
#include "edgeflight/errors.hpp"
#include "edgeflight/planner.hpp"
#include "oracles.hpp"

using namespace edgeflight;

namespace {

double path_cost(const CostField& field, const std::vector<CellIndex>& cells) {
  double c = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) c += field.edge(cells[i - 1], cells[i])->cost;
  return c;
}

CostField uniform_field(GridFrame f, CellIndex goal, std::function<CellLink(CellIndex)> links, double lambda,
                        std::vector<std::uint8_t> forbidden = {}) {
  if (forbidden.empty()) forbidden.assign(f.cell_count(), 0);
  CostField field(f, std::move(links), std::move(forbidden), f.center(goal, 50.0), lambda, 0.0, 15.0);
  field.enable_cost_to_go();
  return field;
}

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("edge cost model") {
  const GridFrame f{3, 3, 5.0};
  const CostField field = uniform_field(
      f, {2, 2}, [](CellIndex c) { return CellLink{c.ix == 0 ? 5.0 : 10.0, c.ix == 2 ? 1.0 : 0.0, 0.0}; }, 2.0);
  const auto straight = field.edge({0, 0}, {1, 0});
  REQUIRE(straight);
  CHECK(straight->time_s == doctest::Approx(1.0));
  CHECK(straight->cost == doctest::Approx(1.0));
  const auto into_nlos = field.edge({1, 0}, {2, 0});
  CHECK(into_nlos->time_s == doctest::Approx(0.5));
  CHECK(into_nlos->cost == doctest::Approx(0.5 * (1.0 + 2.0 * 0.5)));
  const auto diag = field.edge({1, 1}, {2, 2});
  CHECK(diag->time_s == doctest::Approx(5.0 * std::sqrt(2.0) / 10.0));
  CHECK_FALSE(field.edge({0, 0}, {2, 0}));
  CHECK_FALSE(field.edge({0, 0}, {0, 0}));
}

TEST_CASE("diagonal moves may not cut forbidden corners") {
  const GridFrame f{3, 3, 5.0};
  std::vector<std::uint8_t> forb(9, 0);
  forb[f.linear({1, 0})] = 1;
  const CostField field = uniform_field(f, {2, 2}, [](CellIndex) { return CellLink{10.0, 0.0, 0.0}; }, 0.0, forb);
  CHECK_FALSE(field.edge({0, 0}, {1, 1}));
  CHECK_FALSE(field.edge({0, 0}, {1, 0}));
  CHECK(field.edge({0, 0}, {0, 1}));
}

TEST_CASE("forbidden mask inflates known tall cells") {
  const GridFrame f{5, 5, 5.0};
  ExploredMap m(f);
  m.reveal({2, 2}, 60.0);
  m.reveal({0, 0}, 49.9);
  const auto mask = forbidden_mask(m, 50.0, 1);
  int count = 0;
  for (auto v : mask) count += v;
  CHECK(count == 9);
  CHECK(mask[f.linear({1, 1})] == 1);
  CHECK(mask[f.linear({0, 0})] == 0);
  CHECK(forbidden_mask(m, 50.0, 0)[f.linear({2, 2})] == 1);
}

TEST_CASE("cost-to-go matches Bellman-Ford") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto c = cases::synthetic_field(seed, 15, 12, 2.0, 12.0, 2.0);
    const auto bf = oracle::bellman_ford_cost_to_go(c.field);
    const GridFrame& f = c.field.frame();
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
      const double h = c.field.heuristic(f.from_linear(i));
      if (std::isinf(bf[i])) {
        CHECK(std::isinf(h));
      } else {
        CHECK(h == doctest::Approx(bf[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("lattice search equals brute-force enumeration on synthetic fields") {
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    const auto c = cases::synthetic_field(seed, 12, 12, 3.0, 8.0, 2.0);
    const double horizon = 3.0;
    const LatticePath p = search_lattice(c.field, c.start, horizon);
    const auto brute = oracle::brute_force_plan(c.field, c.start, horizon);
    REQUIRE(brute);
    CHECK(p.objective == doctest::Approx(brute->objective).epsilon(1e-12));
    CHECK(path_cost(c.field, p.cells) + c.field.heuristic(p.cells.back()) ==
          doctest::Approx(brute->objective).epsilon(1e-12));
  }
}

TEST_CASE("plan_step commits the brute-force optimum in fully known small cities") {
  PlanConfig pc;
  pc.horizon_s = 2.5;
  pc.replan_period_s = 1.0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto w = cases::small_world(seed);
    for (PlannerKind kind : {PlannerKind::Ecaaf, PlannerKind::Baseline, PlannerKind::GlobeMap}) {
      const PlanInputs in = w->inputs(kind);
      UavState st;
      st.position = w->sc.start;
      const PlanResult r = plan_step(kind, st, in, pc);
      const CellIndex start = w->sc.truth.frame().cell_of(st.position.x, st.position.y);
      const CostField field = make_cost_field(kind, in, pc, start);
      const auto brute = oracle::brute_force_plan(field, start, pc.horizon_s);
      REQUIRE(brute);
      std::vector<CellIndex> committed{start};
      committed.insert(committed.end(), r.committed.cells.begin(), r.committed.cells.end());
      CHECK(committed == r.path.cells);
      CHECK(path_cost(field, committed) + field.heuristic(committed.back()) ==
            doctest::Approx(brute->objective).epsilon(1e-12));
    }
  }
}

TEST_CASE("NLoS corridor is avoided for a LoS detour") {
  const GridFrame f{20, 20, 5.0};
  auto links = [](CellIndex c) {
    const bool corridor = c.iy >= 8 && c.iy <= 12 && c.ix >= 3 && c.ix <= 16;
    return corridor ? CellLink{5.0, 1.0, 0.0} : CellLink{15.0, 0.0, 0.0};
  };
  const CostField field = uniform_field(f, {18, 10}, links, 2.0);
  const LatticePath p = search_lattice(field, {1, 10}, 10.0);
  bool enters = false;
  for (const CellIndex& c : p.cells) enters = enters || (c.iy >= 8 && c.iy <= 12 && c.ix >= 3 && c.ix <= 16);
  CHECK_FALSE(enters);
  CHECK(p.cells.back() == CellIndex{18, 10});
  std::vector<CellIndex> direct;
  for (int ix = 1; ix <= 18; ++ix) direct.push_back({ix, 10});
  CHECK(p.cost <= path_cost(field, direct));
}

TEST_CASE("zero penalty and uniform speed reduce to the shortest path") {
  const GridFrame f{15, 15, 5.0};
  const CostField field = uniform_field(f, {12, 5}, [](CellIndex) { return CellLink{10.0, 1.0, 0.0}; }, 0.0);
  const LatticePath p = search_lattice(field, {2, 1}, 20.0);
  // Octile distance: 4 diagonal + 6 straight moves.
  CHECK(p.cells.back() == CellIndex{12, 5});
  CHECK(p.time_s == doctest::Approx((4.0 * std::sqrt(2.0) + 6.0) * 5.0 / 10.0));
  CHECK(p.cells.size() == 11);
}

TEST_CASE("flat city plans the straight line at top speed and ends on the goal") {
  auto w = cases::small_world(9);
  w->sc.truth = HeightField(w->sc.truth.frame(), std::vector<double>(400, 0.0));
  w->explored = ExploredMap::fully_known(w->sc.truth);
  w->sc.start = w->sc.truth.frame().center({2, 5}, 50.0);
  w->sc.goal = w->sc.truth.frame().center({12, 5}, 50.0);
  w->offload.v_max_mps = 15.0;
  w->channel.bandwidth_hz = 20e6;
  w->global = std::make_unique<GlobalLinkTable>(w->sc, w->channel, w->offload);
  w->radio_map = std::make_unique<RadioMap>(w->sc.truth.frame(), w->sc.serving(), 50.0, w->channel);
  for (PlannerKind kind : {PlannerKind::Ecaaf, PlannerKind::GlobeMap}) {
    UavState st;
    st.position = w->sc.start;
    const PlanResult r = plan_step(kind, st, w->inputs(kind), PlanConfig{});
    REQUIRE(r.committed.cells.size() == 10);
    for (std::size_t i = 0; i < r.committed.cells.size(); ++i) CHECK(r.committed.cells[i].iy == 5);
    CHECK(r.committed.waypoints.back().position == w->sc.goal);
    for (std::size_t i = 0; i + 1 < r.committed.waypoints.size(); ++i) CHECK(r.committed.waypoints[i].speed_mps == 15.0);
  }
}

TEST_CASE("committed samples respect spacing and speed limits") {
  PlanConfig pc;
  const auto w = cases::small_world(5);
  for (PlannerKind kind : {PlannerKind::Ecaaf, PlannerKind::Baseline, PlannerKind::GlobeMap}) {
    const PlanInputs in = w->inputs(kind);
    UavState st;
    st.position = w->sc.start;
    const PlanResult r = plan_step(kind, st, in, pc);
    const auto& s = r.committed.samples;
    for (std::size_t i = 1; i < s.size(); ++i) {
      CHECK(s[i].time_s > s[i - 1].time_s);
      CHECK(distance(s[i].position, s[i - 1].position) <= s[i - 1].speed_mps * pc.sample_tick_s + 1e-9);
      CHECK(s[i].position.z == 50.0);
    }
    for (std::size_t i = 0; i + 1 < r.committed.waypoints.size(); ++i) {
      const CellIndex a = i == 0 ? w->sc.truth.frame().cell_of(st.position.x, st.position.y) : r.committed.cells[i - 1];
      const CellIndex b = r.committed.cells[i];
      CHECK(r.committed.waypoints[i].speed_mps <= cell_speed_limit(kind, a, in).speed_limit_mps);
      CHECK(r.committed.waypoints[i].speed_mps <= cell_speed_limit(kind, b, in).speed_limit_mps);
    }
  }
}

TEST_CASE("unknown cells are planned through but never committed") {
  auto w = cases::small_world(6);
  const GridFrame& f = w->sc.truth.frame();
  w->explored = ExploredMap(f);
  const CellIndex s = f.cell_of(w->sc.start.x, w->sc.start.y);
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      const CellIndex c{s.ix + dx, s.iy + dy};
      if (f.in_bounds(c)) w->explored.reveal(c, w->sc.truth.at(c));
    }
  }
  UavState st;
  st.position = w->sc.start;
  const PlanResult r = plan_step(PlannerKind::Ecaaf, st, w->inputs(PlannerKind::Ecaaf), PlanConfig{});
  for (const CellIndex& c : r.committed.cells) CHECK(w->explored.known(c));
  CHECK(r.path.cells.size() >= r.committed.cells.size() + 1);
}

TEST_CASE("cell speed limits per planner kind") {
  const auto w = cases::small_world(3);
  const GridFrame& f = w->sc.truth.frame();
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const CellIndex c = f.from_linear(i);
    const Vec3 p = f.center(c, 50.0);
    const CellLink g = cell_speed_limit(PlannerKind::GlobeMap, c, w->inputs(PlannerKind::GlobeMap));
    const LinkSnapshot t = true_link(w->sc, p, w->channel);
    CHECK(g.speed_limit_mps == govern(t.uplink_bps, t.downlink_bps, w->offload).speed_limit_mps);
    CHECK(g.nlos == (t.state == LinkState::NLoS ? 1.0 : 0.0));
    CHECK(g.interference_penalty >= 0.0);
    CHECK(g.interference_penalty <= 1.0);
    const CellLink e = cell_speed_limit(PlannerKind::Ecaaf, c, w->inputs(PlannerKind::Ecaaf));
    CHECK(e.speed_limit_mps >= g.speed_limit_mps);  // interference-free, same state under full knowledge
    const CellLink b = cell_speed_limit(PlannerKind::Baseline, c, w->inputs(PlannerKind::Baseline));
    CHECK(b.nlos == 0.0);
  }
  OffloadConfig oc;
  CHECK(speed_limit(select_mode(0.0, oc.local_fps).effective_fps, oc) == 1.0);
}

TEST_CASE("newly sensed obstacle on the committed segment triggers a replan") {
  const GridFrame f{10, 10, 5.0};
  TrajectorySegment seg;
  seg.waypoints = {{f.center({1, 1}, 50.0), 5.0}, {f.center({2, 1}, 50.0), 5.0}, {f.center({3, 1}, 50.0), 0.0}};
  seg.cells = {{2, 1}, {3, 1}};
  ExploredMap m(f);
  CHECK_FALSE(segment_invalidated(seg, 1, m, 50.0, 1));
  m.reveal({4, 2}, 70.0);
  CHECK(segment_invalidated(seg, 1, m, 50.0, 1));
  CHECK_FALSE(segment_invalidated(seg, 1, m, 50.0, 0));

  PlanConfig pc;
  CHECK(replan_due(1.0, 0.0, pc));
  CHECK_FALSE(replan_due(0.5, 0.0, pc));
  CHECK(replan_due(0.2, 0.0, pc, true));
}

TEST_CASE("isolated start raises Stuck") {
  const GridFrame f{5, 5, 5.0};
  std::vector<std::uint8_t> forb(25, 1);
  forb[f.linear({2, 2})] = 0;
  forb[f.linear({4, 4})] = 0;
  CostField field(f, [](CellIndex) { return CellLink{10.0, 0.0, 0.0}; }, forb, f.center({4, 4}), 0.0, 0.0, 10.0);
  CHECK_THROWS_AS(search_lattice(field, {2, 2}, 10.0), StuckError);
}

TEST_CASE("planning is deterministic") {
  const auto w = cases::small_world(12);
  UavState st;
  st.position = w->sc.start;
  for (PlannerKind kind : {PlannerKind::Ecaaf, PlannerKind::Baseline, PlannerKind::GlobeMap}) {
    const PlanResult a = plan_step(kind, st, w->inputs(kind), PlanConfig{});
    const PlanResult b = plan_step(kind, st, w->inputs(kind), PlanConfig{});
    CHECK(a.path.cells == b.path.cells);
    CHECK(a.path.objective == b.path.objective);
    CHECK(a.committed.cells == b.committed.cells);
  }
}

TEST_CASE("planner kind names") {
  CHECK(parse_planner_kind("ECAAF") == PlannerKind::Ecaaf);
  CHECK(parse_planner_kind("baseline") == PlannerKind::Baseline);
  CHECK(parse_planner_kind("GlobeMap") == PlannerKind::GlobeMap);
  CHECK_FALSE(parse_planner_kind("astar"));
  CHECK(to_string(PlannerKind::GlobeMap) == "GlobeMap");
}

}
