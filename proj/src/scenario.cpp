#include "edgeflight/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "edgeflight/errors.hpp"
#include "edgeflight/rng.hpp"

namespace edgeflight {

namespace {

int to_cells(double length_m, double cell_size_m) {
  return static_cast<int>(std::lround(length_m / cell_size_m));
}

bool is_multiple(double length_m, double cell_size_m) {
  const double q = length_m / cell_size_m;
  return std::abs(q - std::round(q)) < 1e-9;
}

// Stream for placement, independent of the city-height stream.
Rng placement_rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  splitmix64(state);
  return Rng(splitmix64(state));
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(cell_size_m > 0.0)) throw ConfigError("scenario.cell_size_m must be positive");
  if (!(map_width_m > 0.0) || !(map_depth_m > 0.0)) throw ConfigError("scenario map size must be positive");
  if (!is_multiple(map_width_m, cell_size_m) || !is_multiple(map_depth_m, cell_size_m)) {
    throw ConfigError("scenario map size must be divisible by cell_size_m");
  }
  if (!(rayleigh_scale_m >= 0.0)) throw ConfigError("scenario.rayleigh_scale_m must be >= 0");
  if (!(building_footprint_m >= cell_size_m)) throw ConfigError("scenario.building_footprint_m must cover at least one cell");
  if (!(street_width_m >= 0.0)) throw ConfigError("scenario.street_width_m must be >= 0");
  if (!is_multiple(building_footprint_m, cell_size_m) || !is_multiple(street_width_m, cell_size_m)) {
    throw ConfigError("scenario footprint and street width must be multiples of cell_size_m");
  }
  if (building_footprint_m + street_width_m > std::min(map_width_m, map_depth_m)) {
    throw ConfigError("scenario footprint + street width exceeds the map size");
  }
  if (n_bs < 1) throw ConfigError("scenario.n_bs must be >= 1");
  if (!(bs_height_m > 0.0)) throw ConfigError("scenario.bs_height_m must be positive");
  if (!(uav_altitude_m > 0.0)) throw ConfigError("scenario.uav_altitude_m must be positive");
  if (!(endpoint_min_m >= 0.0) || !(endpoint_max_m >= endpoint_min_m)) {
    throw ConfigError("scenario endpoint distance range must satisfy 0 <= min <= max");
  }
  if (endpoint_max_m > std::hypot(map_width_m, map_depth_m)) {
    throw ConfigError("scenario endpoint distance range exceeds the map diagonal");
  }
  if (endpoint_clearance_cells < 0) throw ConfigError("scenario.endpoint_clearance_cells must be >= 0");
}

GridFrame ScenarioConfig::frame() const {
  return {to_cells(map_width_m, cell_size_m), to_cells(map_depth_m, cell_size_m), cell_size_m};
}

HeightField::HeightField(GridFrame frame, std::vector<double> heights)
    : frame_(frame), heights_(std::move(heights)) {
  if (heights_.size() != frame_.cell_count()) throw std::invalid_argument("HeightField: size mismatch");
  for (double h : heights_) {
    if (!(h >= 0.0)) throw std::invalid_argument("HeightField: heights must be >= 0");
  }
}

std::vector<Block> city_blocks(const ScenarioConfig& cfg) {
  cfg.validate();
  const GridFrame f = cfg.frame();
  const int footprint = to_cells(cfg.building_footprint_m, cfg.cell_size_m);
  const int street = to_cells(cfg.street_width_m, cfg.cell_size_m);
  const int period = footprint + street;
  const int offset = street / 2;

  std::vector<Block> blocks;
  for (int y0 = offset; y0 + footprint <= f.depth - offset; y0 += period) {
    for (int x0 = offset; x0 + footprint <= f.width - offset; x0 += period) {
      blocks.push_back({x0, y0, x0 + footprint, y0 + footprint});
    }
  }
  return blocks;
}

std::vector<bool> street_mask(const ScenarioConfig& cfg) {
  const GridFrame f = cfg.frame();
  std::vector<bool> mask(f.cell_count(), true);
  for (const Block& b : city_blocks(cfg)) {
    for (int iy = b.y0; iy < b.y1; ++iy) {
      for (int ix = b.x0; ix < b.x1; ++ix) mask[f.linear({ix, iy})] = false;
    }
  }
  return mask;
}

HeightField generate_city(const ScenarioConfig& cfg) {
  cfg.validate();
  const GridFrame f = cfg.frame();
  std::vector<double> heights(f.cell_count(), 0.0);
  Rng rng(cfg.rng_seed);
  for (const Block& b : city_blocks(cfg)) {
    const double h = rng.rayleigh(cfg.rayleigh_scale_m);
    for (int iy = b.y0; iy < b.y1; ++iy) {
      for (int ix = b.x0; ix < b.x1; ++ix) heights[f.linear({ix, iy})] = h;
    }
  }
  return HeightField(f, std::move(heights));
}

Scenario place_bs_and_endpoints(const ScenarioConfig& cfg, const HeightField& truth) {
  cfg.validate();
  const GridFrame f = cfg.frame();
  if (!(truth.frame() == f)) throw ConfigError("height field does not match the scenario grid");

  Rng rng = placement_rng(cfg.rng_seed);
  Scenario sc;
  sc.truth = truth;
  sc.uav_altitude_m = cfg.uav_altitude_m;

  // Base stations.
  const std::vector<bool> streets = street_mask(cfg);
  std::vector<std::size_t> street_cells;
  for (std::size_t i = 0; i < streets.size(); ++i) {
    if (streets[i]) street_cells.push_back(i);
  }
  if (street_cells.empty()) throw ScenarioError("no street cells for base stations");

  const double min_sep = 0.25 * std::hypot(f.width_m(), f.depth_m());
  constexpr int kBsAttempts = 10000;
  for (int b = 0; b < cfg.n_bs; ++b) {
    bool placed = false;
    for (int attempt = 0; attempt < kBsAttempts && !placed; ++attempt) {
      const auto pick = street_cells[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(street_cells.size()) - 1))];
      const Vec3 p = f.center(f.from_linear(pick), cfg.bs_height_m);
      const bool separated = std::all_of(sc.bs_positions.begin(), sc.bs_positions.end(),
                                         [&](const Vec3& q) { return horizontal_distance(p, q) >= min_sep; });
      if (separated) {
        sc.bs_positions.push_back(p);
        placed = true;
      }
    }
    if (!placed) throw ScenarioError(fmt::format("could not place base station {} with {:.1f} m separation", b, min_sep));
  }

  // Free cells for endpoints: below altitude with Chebyshev clearance from taller cells.
  std::vector<bool> blocked(f.cell_count(), false);
  for (std::size_t i = 0; i < blocked.size(); ++i) {
    if (truth.at(i) >= cfg.uav_altitude_m) blocked[i] = true;
  }
  std::vector<std::size_t> free_cells;
  const int m = cfg.endpoint_clearance_cells;
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      bool ok = true;
      for (int dy = -m; dy <= m && ok; ++dy) {
        for (int dx = -m; dx <= m && ok; ++dx) {
          const CellIndex n{ix + dx, iy + dy};
          if (f.in_bounds(n) && blocked[f.linear(n)]) ok = false;
        }
      }
      if (ok) free_cells.push_back(f.linear({ix, iy}));
    }
  }
  if (free_cells.empty()) throw ScenarioError("no collision-free cells for mission endpoints");

  constexpr int kStartAttempts = 200;
  constexpr double kTol = 1e-9;
  bool found = false;
  for (int attempt = 0; attempt < kStartAttempts && !found; ++attempt) {
    const auto si = free_cells[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(free_cells.size()) - 1))];
    const Vec3 start = f.center(f.from_linear(si), cfg.uav_altitude_m);
    std::vector<std::size_t> goals;
    for (std::size_t gi : free_cells) {
      const double d = horizontal_distance(start, f.center(f.from_linear(gi)));
      if (d >= cfg.endpoint_min_m - kTol && d <= cfg.endpoint_max_m + kTol) goals.push_back(gi);
    }
    if (goals.empty()) continue;
    const auto gi = goals[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(goals.size()) - 1))];
    sc.start = start;
    sc.goal = f.center(f.from_linear(gi), cfg.uav_altitude_m);
    found = true;
  }
  if (!found) throw ScenarioError("no feasible start/goal pair after bounded retries; reseed");

  // Serving BS: nearest to start, lowest index on ties.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < sc.bs_positions.size(); ++b) {
    const double d = distance(sc.start, sc.bs_positions[b]);
    if (d < best) {
      best = d;
      sc.serving_bs = static_cast<int>(b);
    }
  }
  return sc;
}

Scenario make_scenario(const ScenarioConfig& cfg) {
  return place_bs_and_endpoints(cfg, generate_city(cfg));
}

CityStats city_stats(const ScenarioConfig& cfg, const HeightField& truth) {
  CityStats s;
  double sum = 0.0;
  for (const Block& b : city_blocks(cfg)) {
    const double h = truth.at(CellIndex{b.x0, b.y0});
    ++s.building_count;
    if (h >= cfg.uav_altitude_m) ++s.above_altitude_count;
    sum += h;
  }
  if (s.building_count > 0) s.mean_height_m = sum / s.building_count;
  return s;
}

}  // namespace edgeflight
