#include "edgeflight/worldmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "edgeflight/errors.hpp"

namespace edgeflight {

ExploredMap::ExploredMap(GridFrame frame)
    : frame_(frame), heights_(frame.cell_count(), 0.0), known_(frame.cell_count(), 0) {}

ExploredMap ExploredMap::fully_known(const HeightField& truth) {
  ExploredMap m(truth.frame());
  for (std::size_t i = 0; i < m.heights_.size(); ++i) {
    m.heights_[i] = truth.at(i);
    m.known_[i] = 1;
  }
  m.explored_ = m.heights_.size();
  return m;
}

std::optional<double> ExploredMap::height(CellIndex c) const {
  const std::size_t i = frame_.linear(c);
  if (!known_[i]) return std::nullopt;
  return heights_[i];
}

bool ExploredMap::reveal(CellIndex c, double height_m) {
  const std::size_t i = frame_.linear(c);
  if (known_[i]) return false;
  known_[i] = 1;
  heights_[i] = height_m;
  ++explored_;
  return true;
}

void SensorModel::validate() const {
  if (!(fov_deg > 0.0 && fov_deg <= 360.0)) throw ConfigError("sensor.fov_deg must be in (0, 360]");
  if (!(range_m > 0.0)) throw ConfigError("sensor.range_m must be positive");
}

namespace {

void check_inside(const GridFrame& f, const Vec3& p) {
  if (!f.contains(p.x, p.y)) throw std::out_of_range("ray endpoint outside the map");
}

bool on_grid_line(double v, double cs) {
  const double q = v / cs;
  return q == std::floor(q);
}

}  // namespace

std::vector<RayCell> traverse_ray(const GridFrame& f, const Vec3& a_in, const Vec3& b_in) {
  check_inside(f, a_in);
  check_inside(f, b_in);

  // Canonical direction: x never decreases; y only decreases when x increases.
  const bool swap = std::tie(b_in.x, b_in.y, b_in.z) < std::tie(a_in.x, a_in.y, a_in.z);
  const Vec3& a = swap ? b_in : a_in;
  const Vec3& b = swap ? a_in : b_in;

  const double cs = f.cell_size_m;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  auto z_at = [&](double t) { return a.z + t * dz; };

  std::vector<RayCell> out;
  if (dx == 0.0 && dy == 0.0) {
    out.push_back({f.cell_of(a.x, a.y), a.z, b.z});
    return out;
  }

  CellIndex c = f.cell_of(a.x, a.y);
  if (dy < 0.0 && on_grid_line(a.y, cs) && a.y > 0.0 && a.y < f.depth_m()) c.iy -= 1;

  const double inf = std::numeric_limits<double>::infinity();
  auto next_x = [&](int ix) { return dx > 0.0 ? ((ix + 1) * cs - a.x) / dx : inf; };
  auto next_y = [&](int iy) {
    if (dy > 0.0) return ((iy + 1) * cs - a.y) / dy;
    if (dy < 0.0) return (a.y - iy * cs) / (-dy);
    return inf;
  };

  constexpr double kEndEps = 1e-12;
  constexpr double kTieEps = 1e-12;
  const int step_y = dy > 0.0 ? 1 : -1;
  double t_enter = 0.0;
  while (true) {
    const double tx = next_x(c.ix);
    const double ty = next_y(c.iy);
    const double t_exit = std::min({tx, ty, 1.0});
    out.push_back({c, z_at(t_enter), z_at(t_exit)});
    if (t_exit >= 1.0 - kEndEps) break;

    if (std::abs(tx - ty) <= kTieEps) {
      c.ix += 1;
      c.iy += step_y;
    } else if (tx < ty) {
      c.ix += 1;
    } else {
      c.iy += step_y;
    }
    if (!f.in_bounds(c)) break;
    t_enter = t_exit;
  }
  return out;
}

RayResult ray_blocked(const HeightField& map, const Vec3& a, const Vec3& b) {
  const GridFrame& f = map.frame();
  const auto cells = traverse_ray(f, a, b);
  const CellIndex ca = f.cell_of(a.x, a.y);
  const CellIndex cb = f.cell_of(b.x, b.y);
  for (const RayCell& rc : cells) {
    if (rc.cell == ca || rc.cell == cb) continue;
    if (std::min(rc.z_entry, rc.z_exit) < map.at(rc.cell)) return RayResult::Blocked;
  }
  return RayResult::Clear;
}

RayResult ray_blocked(const ExploredMap& map, const Vec3& a, const Vec3& b, UnknownPolicy unknown_policy) {
  const GridFrame& f = map.frame();
  const auto cells = traverse_ray(f, a, b);
  const CellIndex ca = f.cell_of(a.x, a.y);
  const CellIndex cb = f.cell_of(b.x, b.y);
  bool unknown = false;
  for (const RayCell& rc : cells) {
    if (rc.cell == ca || rc.cell == cb) continue;
    const auto h = map.height(rc.cell);
    if (!h) {
      if (unknown_policy == UnknownPolicy::Blocked) return RayResult::Blocked;
      unknown = true;
      continue;
    }
    if (std::min(rc.z_entry, rc.z_exit) < *h) return RayResult::Blocked;
  }
  return unknown ? RayResult::CrossesUnknown : RayResult::Clear;
}

bool in_sensor_footprint(const GridFrame& f, CellIndex cell, const Vec3& position, double heading_deg,
                         const SensorModel& sensor) {
  const Vec3 c = f.center(cell);
  const double ddx = c.x - position.x;
  const double ddy = c.y - position.y;
  const double d = std::hypot(ddx, ddy);
  if (d > sensor.range_m) return false;
  if (d < 1e-9 || sensor.fov_deg >= 360.0) return true;
  const double bearing = rad_to_deg(std::atan2(ddy, ddx));
  return std::abs(wrap_deg(bearing - heading_deg)) <= 0.5 * sensor.fov_deg + 1e-9;
}

std::size_t sense(const HeightField& truth, ExploredMap& explored, const Vec3& position, double heading_deg,
                  const SensorModel& sensor) {
  const GridFrame& f = truth.frame();
  const double cs = f.cell_size_m;
  const int x_lo = std::max(0, static_cast<int>(std::floor((position.x - sensor.range_m) / cs)));
  const int x_hi = std::min(f.width - 1, static_cast<int>(std::floor((position.x + sensor.range_m) / cs)));
  const int y_lo = std::max(0, static_cast<int>(std::floor((position.y - sensor.range_m) / cs)));
  const int y_hi = std::min(f.depth - 1, static_cast<int>(std::floor((position.y + sensor.range_m) / cs)));

  std::size_t revealed = 0;
  for (int iy = y_lo; iy <= y_hi; ++iy) {
    for (int ix = x_lo; ix <= x_hi; ++ix) {
      const CellIndex c{ix, iy};
      if (explored.known(c)) continue;
      if (!in_sensor_footprint(f, c, position, heading_deg, sensor)) continue;
      if (explored.reveal(c, truth.at(c))) ++revealed;
    }
  }
  return revealed;
}

}  // namespace edgeflight
