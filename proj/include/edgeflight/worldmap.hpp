#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "edgeflight/geometry.hpp"
#include "edgeflight/grid.hpp"
#include "edgeflight/scenario.hpp"

namespace edgeflight {

enum class RayResult { Clear, Blocked, CrossesUnknown };
enum class UnknownPolicy { Free, Blocked };

/// The UAV's incremental knowledge of the city. Known heights always equal
/// ground truth; cells never revert to Unknown.
class ExploredMap {
 public:
  ExploredMap() = default;
  explicit ExploredMap(GridFrame frame);

  /// A map with every cell known (global-map knowledge).
  static ExploredMap fully_known(const HeightField& truth);

  const GridFrame& frame() const { return frame_; }
  bool known(CellIndex c) const { return known_[frame_.linear(c)] != 0; }
  bool known(std::size_t linear) const { return known_[linear] != 0; }
  std::optional<double> height(CellIndex c) const;
  std::size_t explored_cell_count() const { return explored_; }

  /// Marks the cell Known with the given height; returns true if it was Unknown.
  bool reveal(CellIndex c, double height_m);

  friend bool operator==(const ExploredMap&, const ExploredMap&) = default;

 private:
  GridFrame frame_{};
  std::vector<double> heights_;
  std::vector<std::uint8_t> known_;
  std::size_t explored_ = 0;
};

struct SensorModel {
  double fov_deg = 120.0;
  double range_m = 50.0;

  void validate() const;
};

/// One traversed cell of a ray and the segment altitude where it enters and leaves.
struct RayCell {
  CellIndex cell;
  double z_entry = 0.0;
  double z_exit = 0.0;
};

/// Incremental grid traversal of the horizontal projection of ab. Every cell the
/// segment crosses is visited once, in order from the lexicographically smaller
/// endpoint, so the visited set does not depend on argument order. Exact corner
/// crossings step diagonally without visiting the two side cells.
/// Throws std::out_of_range when an endpoint lies outside the map.
std::vector<RayCell> traverse_ray(const GridFrame& frame, const Vec3& a, const Vec3& b);

/// Link-blocking query against ground truth. Cells containing a or b are ignored.
RayResult ray_blocked(const HeightField& map, const Vec3& a, const Vec3& b);

/// Same query against explored knowledge. Blocked wins over Unknown anywhere on the
/// ray; with UnknownPolicy::Blocked, any Unknown cell blocks.
RayResult ray_blocked(const ExploredMap& map, const Vec3& a, const Vec3& b,
                      UnknownPolicy unknown_policy = UnknownPolicy::Free);

/// Angle/range predicate used by sense(): center within range and within
/// +-fov/2 of heading. The cell holding the sensor itself always qualifies.
bool in_sensor_footprint(const GridFrame& frame, CellIndex cell, const Vec3& position, double heading_deg,
                         const SensorModel& sensor);

/// Reveals every cell inside the sensor footprint. No occlusion. Returns the
/// number of newly known cells.
std::size_t sense(const HeightField& truth, ExploredMap& explored, const Vec3& position, double heading_deg,
                  const SensorModel& sensor);

}  // namespace edgeflight
