#pragma once

#include <cstdint>
#include <vector>

#include "edgeflight/geometry.hpp"
#include "edgeflight/grid.hpp"

namespace edgeflight {

struct ScenarioConfig {
  double map_width_m = 400.0;
  double map_depth_m = 400.0;
  double cell_size_m = 5.0;
  double rayleigh_scale_m = 35.0;
  double building_footprint_m = 30.0;
  double street_width_m = 20.0;
  int n_bs = 3;
  double bs_height_m = 25.0;
  double uav_altitude_m = 50.0;
  double endpoint_min_m = 200.0;
  double endpoint_max_m = 400.0;
  // Endpoints keep this many cells of Chebyshev clearance from cells that
  // are taller than the cruise altitude.
  int endpoint_clearance_cells = 1;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  GridFrame frame() const;
};

/// Ground-truth 2.5D city: one height per cell, 0 on streets. Immutable once built.
class HeightField {
 public:
  HeightField() = default;
  HeightField(GridFrame frame, std::vector<double> heights);

  const GridFrame& frame() const { return frame_; }
  double at(CellIndex c) const { return heights_[frame_.linear(c)]; }
  double at(std::size_t linear) const { return heights_[linear]; }
  const std::vector<double>& heights() const { return heights_; }

  friend bool operator==(const HeightField&, const HeightField&) = default;

 private:
  GridFrame frame_{};
  std::vector<double> heights_;
};

/// Axis-aligned building block in cell coordinates, [x0, x1) x [y0, y1).
struct Block {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
};

/// Manhattan layout: every block fits fully inside the map with half a street
/// of margin on the outer edges. Blocks are listed row by row.
std::vector<Block> city_blocks(const ScenarioConfig& cfg);

/// True for cells outside every block.
std::vector<bool> street_mask(const ScenarioConfig& cfg);

/// Builds the city; each block's height is one i.i.d. Rayleigh(rayleigh_scale_m) draw,
/// consumed in block order from Rng(cfg.rng_seed).
HeightField generate_city(const ScenarioConfig& cfg);

struct Scenario {
  HeightField truth;
  std::vector<Vec3> bs_positions;
  int serving_bs = 0;
  Vec3 start;
  Vec3 goal;
  double uav_altitude_m = 50.0;

  const Vec3& serving() const { return bs_positions.at(static_cast<std::size_t>(serving_bs)); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Places base stations on street cells with pairwise separation of at least a
/// quarter map diagonal, then samples start and goal cell centers. Throws
/// ScenarioError when retries are exhausted.
Scenario place_bs_and_endpoints(const ScenarioConfig& cfg, const HeightField& truth);

/// generate_city followed by place_bs_and_endpoints.
Scenario make_scenario(const ScenarioConfig& cfg);

/// Summary counters for a generated city.
struct CityStats {
  int building_count = 0;
  int above_altitude_count = 0;
  double mean_height_m = 0.0;
};

CityStats city_stats(const ScenarioConfig& cfg, const HeightField& truth);

}  // namespace edgeflight
