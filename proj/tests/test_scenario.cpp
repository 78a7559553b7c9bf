#include <doctest.h>

#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include "edgeflight/errors.hpp"
#include "edgeflight/rng.hpp"
#include "edgeflight/scenario.hpp"

using namespace edgeflight;

namespace {

ScenarioConfig with_seed(std::uint64_t seed) {
  ScenarioConfig c;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("default city covers 400 x 400 m with an 8 x 8 block layout") {
  const ScenarioConfig cfg;
  const HeightField h = generate_city(cfg);
  CHECK(h.frame().width_m() == 400.0);
  CHECK(h.frame().depth_m() == 400.0);
  CHECK(h.frame().width == 80);
  CHECK(city_blocks(cfg).size() == 64);
  for (const Block& b : city_blocks(cfg)) {
    CHECK(b.x1 - b.x0 == 6);
    CHECK(b.y1 - b.y0 == 6);
  }
}

TEST_CASE("heights are constant per block and zero on streets") {
  const ScenarioConfig cfg = with_seed(11);
  const HeightField h = generate_city(cfg);
  const auto streets = street_mask(cfg);
  const GridFrame f = h.frame();
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    CHECK(h.at(i) >= 0.0);
    if (streets[i]) CHECK(h.at(i) == 0.0);
  }
  std::vector<int> owner(f.cell_count(), 0);
  for (const Block& b : city_blocks(cfg)) {
    const double ref = h.at(CellIndex{b.x0, b.y0});
    for (int iy = b.y0; iy < b.y1; ++iy) {
      for (int ix = b.x0; ix < b.x1; ++ix) {
        CHECK(h.at(CellIndex{ix, iy}) == ref);
        ++owner[f.linear({ix, iy})];
      }
    }
  }
  for (std::size_t i = 0; i < f.cell_count(); ++i) CHECK(owner[i] == (streets[i] ? 0 : 1));
}

TEST_CASE("block heights are the first Rayleigh draws of the seed") {
  const ScenarioConfig cfg = with_seed(77);
  const HeightField h = generate_city(cfg);
  Rng r(77);
  for (const Block& b : city_blocks(cfg)) CHECK(h.at(CellIndex{b.x0, b.y0}) == r.rayleigh(35.0));
}

TEST_CASE("zero scale gives a flat city") {
  ScenarioConfig cfg = with_seed(3);
  cfg.rayleigh_scale_m = 0.0;
  const HeightField h = generate_city(cfg);
  for (double v : h.heights()) CHECK(v == 0.0);
}

TEST_CASE("streets form one connected component") {
  const ScenarioConfig cfg;
  const auto streets = street_mask(cfg);
  const GridFrame f = cfg.frame();
  std::vector<char> seen(f.cell_count(), 0);
  std::size_t first = 0;
  while (!streets[first]) ++first;
  std::queue<std::size_t> q;
  q.push(first);
  seen[first] = 1;
  while (!q.empty()) {
    const CellIndex c = f.from_linear(q.front());
    q.pop();
    const CellIndex nb[4] = {{c.ix + 1, c.iy}, {c.ix - 1, c.iy}, {c.ix, c.iy + 1}, {c.ix, c.iy - 1}};
    for (const CellIndex& n : nb) {
      if (!f.in_bounds(n) || !streets[f.linear(n)] || seen[f.linear(n)]) continue;
      seen[f.linear(n)] = 1;
      q.push(f.linear(n));
    }
  }
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (streets[i]) CHECK(seen[i]);
  }
}

TEST_CASE("scenario invariants hold across seeds") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ScenarioConfig cfg = with_seed(seed);
    Scenario sc;
    try {
      sc = make_scenario(cfg);
    } catch (const ScenarioError&) {
      continue;
    }
    const GridFrame f = sc.truth.frame();
    const auto streets = street_mask(cfg);
    CHECK(sc.bs_positions.size() == 3);
    const double min_sep = 0.25 * std::hypot(400.0, 400.0);
    for (std::size_t i = 0; i < sc.bs_positions.size(); ++i) {
      const Vec3& b = sc.bs_positions[i];
      CHECK(b.z == 25.0);
      CHECK(streets[f.linear(f.cell_of(b.x, b.y))]);
      for (std::size_t j = i + 1; j < sc.bs_positions.size(); ++j) {
        CHECK(horizontal_distance(b, sc.bs_positions[j]) >= min_sep);
      }
    }
    for (const Vec3& p : {sc.start, sc.goal}) {
      CHECK(p.z == 50.0);
      CHECK(f.contains(p.x, p.y));
      CHECK(sc.truth.at(f.cell_of(p.x, p.y)) < 50.0);
    }
    const double d = horizontal_distance(sc.start, sc.goal);
    CHECK(d >= 200.0 - 1e-9);
    CHECK(d <= 400.0 + 1e-9);
    for (std::size_t b = 0; b < sc.bs_positions.size(); ++b) {
      CHECK(distance(sc.start, sc.serving()) <= distance(sc.start, sc.bs_positions[b]));
    }
  }
}

TEST_CASE("generation is deterministic per seed") {
  const ScenarioConfig cfg = with_seed(123);
  CHECK(make_scenario(cfg) == make_scenario(cfg));
  CHECK_FALSE(generate_city(with_seed(1)) == generate_city(with_seed(2)));
}

TEST_CASE("flat city always yields feasible endpoints") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioConfig cfg = with_seed(seed);
    cfg.rayleigh_scale_m = 0.0;
    const Scenario sc = make_scenario(cfg);
    const double d = horizontal_distance(sc.start, sc.goal);
    CHECK(d >= 200.0 - 1e-9);
    CHECK(d <= 400.0 + 1e-9);
  }
}

TEST_CASE("fixed 320 m mission distance is honoured") {
  ScenarioConfig cfg = with_seed(5);
  cfg.endpoint_min_m = cfg.endpoint_max_m = 320.0;
  const Scenario sc = make_scenario(cfg);
  CHECK(horizontal_distance(sc.start, sc.goal) == doctest::Approx(320.0).epsilon(1e-12));
}

TEST_CASE("invalid configurations are rejected") {
  ScenarioConfig a;
  a.building_footprint_m = 300.0;
  a.street_width_m = 200.0;
  CHECK_THROWS_AS(generate_city(a), ConfigError);
  ScenarioConfig b;
  b.map_width_m = 402.0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  ScenarioConfig c;
  c.rayleigh_scale_m = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  ScenarioConfig d;
  d.n_bs = 0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  ScenarioConfig e;
  e.endpoint_max_m = 1000.0;
  CHECK_THROWS_AS(e.validate(), ConfigError);
  CHECK_THROWS_AS(HeightField(GridFrame{2, 2, 5.0}, {0.0, 1.0, -1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(HeightField(GridFrame{2, 2, 5.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("impossible separation raises a scenario error") {
  ScenarioConfig cfg;
  cfg.n_bs = 40;
  CHECK_THROWS_AS(make_scenario(cfg), ScenarioError);
}

TEST_CASE("city statistics count blocks above altitude") {
  const ScenarioConfig cfg = with_seed(9);
  const HeightField h = generate_city(cfg);
  const CityStats st = city_stats(cfg, h);
  CHECK(st.building_count == 64);
  int above = 0;
  double sum = 0.0;
  for (const Block& b : city_blocks(cfg)) {
    const double v = h.at(CellIndex{b.x0, b.y0});
    above += v >= cfg.uav_altitude_m ? 1 : 0;
    sum += v;
  }
  CHECK(st.above_altitude_count == above);
  CHECK(st.mean_height_m == doctest::Approx(sum / 64.0));
}

}
