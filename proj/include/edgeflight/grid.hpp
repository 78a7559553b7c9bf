#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "edgeflight/geometry.hpp"

namespace edgeflight {

/// Uniform planar grid anchored at the origin; cell (ix, iy) covers
/// [ix*cs, (ix+1)*cs) x [iy*cs, (iy+1)*cs).
struct GridFrame {
  int width = 0;   // cells along x
  int depth = 0;   // cells along y
  double cell_size_m = 1.0;

  friend bool operator==(const GridFrame&, const GridFrame&) = default;

  double width_m() const { return width * cell_size_m; }
  double depth_m() const { return depth * cell_size_m; }
  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(depth); }

  bool in_bounds(CellIndex c) const { return c.ix >= 0 && c.iy >= 0 && c.ix < width && c.iy < depth; }

  bool contains(double x, double y) const { return x >= 0.0 && y >= 0.0 && x <= width_m() && y <= depth_m(); }

  /// Cell containing (x, y); points on the far map edge belong to the last cell.
  CellIndex cell_of(double x, double y) const {
    int ix = static_cast<int>(std::floor(x / cell_size_m));
    int iy = static_cast<int>(std::floor(y / cell_size_m));
    if (ix >= width) ix = width - 1;
    if (iy >= depth) iy = depth - 1;
    if (ix < 0) ix = 0;
    if (iy < 0) iy = 0;
    return {ix, iy};
  }

  Vec3 center(CellIndex c, double z = 0.0) const {
    return {(c.ix + 0.5) * cell_size_m, (c.iy + 0.5) * cell_size_m, z};
  }

  /// Row-major linear index (y rows, x columns).
  std::size_t linear(CellIndex c) const {
    return static_cast<std::size_t>(c.iy) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.ix);
  }

  CellIndex from_linear(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width)), static_cast<int>(i / static_cast<std::size_t>(width))};
  }
};

}  // namespace edgeflight
