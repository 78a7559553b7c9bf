#include "edgeflight/radiomap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edgeflight/errors.hpp"

namespace edgeflight {

void RadioMapConfig::validate() const {
  if (update_margin_cells < 0) throw ConfigError("radiomap.update_margin_cells must be >= 0");
  if (extra_layers < 0) throw ConfigError("radiomap.extra_layers must be >= 0");
  if (!(layer_height_m > 0.0)) throw ConfigError("radiomap.layer_height_m must be positive");
}

RadioMap::RadioMap(GridFrame frame, Vec3 bs, double cruise_altitude_m, ChannelParams params, RadioMapConfig cfg)
    : frame_(frame),
      bs_(bs),
      bs_cell_(frame.cell_of(bs.x, bs.y)),
      cruise_altitude_m_(cruise_altitude_m),
      params_(params),
      cfg_(cfg) {}

VoxelKey RadioMap::key_of(const Vec3& p) const {
  const CellIndex c = frame_.cell_of(p.x, p.y);
  const int dz = static_cast<int>(std::lround((p.z - cruise_altitude_m_) / cfg_.layer_height_m));
  return {c.ix - bs_cell_.ix, c.iy - bs_cell_.iy, dz};
}

CellIndex RadioMap::cell_of(const VoxelKey& k) const { return {bs_cell_.ix + k.dx, bs_cell_.iy + k.dy}; }

Vec3 RadioMap::center(const VoxelKey& k) const {
  return frame_.center(cell_of(k), cruise_altitude_m_ + k.dz * cfg_.layer_height_m);
}

bool RadioMap::in_bounds(const VoxelKey& k) const { return frame_.in_bounds(cell_of(k)); }

const RadioEntry* RadioMap::find(const VoxelKey& k) const {
  const auto it = entries_.find(k);
  return it == entries_.end() ? nullptr : &it->second;
}

double RadioMap::gain_for(const VoxelKey& k, LinkState s) const {
  return -path_loss_db(distance(center(k), bs_), s, params_);
}

RadioEntry RadioMap::evaluate(const VoxelKey& k, const ExploredMap& explored) const {
  if (const RadioEntry* e = find(k)) return *e;
  const LinkState s = classify_link(explored, center(k), bs_);
  return {s, gain_for(k, s), false};
}

bool RadioMap::assign(const VoxelKey& k, LinkState s) {
  auto it = entries_.find(k);
  if (it != entries_.end() && it->second.sticky_nlos) return false;
  const RadioEntry e{s, gain_for(k, s), cfg_.sticky_nlos && s == LinkState::NLoS};
  if (it == entries_.end()) {
    entries_.emplace(k, e);
  } else {
    it->second = e;
  }
  return true;
}

LinkState classify_link(const ExploredMap& explored, const Vec3& voxel_center, const Vec3& bs) {
  switch (ray_blocked(explored, bs, voxel_center, UnknownPolicy::Free)) {
    case RayResult::Blocked: return LinkState::NLoS;
    case RayResult::Clear: return LinkState::LoS;
    case RayResult::CrossesUnknown: return LinkState::AssumedLoS;
  }
  return LinkState::AssumedLoS;
}

void update_radio_map(RadioMap& rm, const ExploredMap& explored, const Vec3& around, double radius_m) {
  if (!(radius_m >= 0.0)) throw std::invalid_argument("update_radio_map: radius must be >= 0");
  const GridFrame& f = rm.frame();
  const VoxelKey home = rm.key_of(around);
  const int layers = rm.config().extra_layers;

  auto refresh = [&](const VoxelKey& k) {
    if (!rm.in_bounds(k)) return;
    const Vec3 c = rm.center(k);
    if (c.z <= 0.0 || distance(c, rm.bs()) < 1e-9) return;
    if (const RadioEntry* e = rm.find(k); e && e->sticky_nlos) return;
    rm.assign(k, classify_link(explored, c, rm.bs()));
  };

  const double cs = f.cell_size_m;
  const int x_lo = std::max(0, static_cast<int>(std::floor((around.x - radius_m) / cs)));
  const int x_hi = std::min(f.width - 1, static_cast<int>(std::floor((around.x + radius_m) / cs)));
  const int y_lo = std::max(0, static_cast<int>(std::floor((around.y - radius_m) / cs)));
  const int y_hi = std::min(f.depth - 1, static_cast<int>(std::floor((around.y + radius_m) / cs)));
  const CellIndex home_cell = rm.cell_of(home);

  for (int dz = home.dz - layers; dz <= home.dz + layers; ++dz) {
    for (int iy = y_lo; iy <= y_hi; ++iy) {
      for (int ix = x_lo; ix <= x_hi; ++ix) {
        const CellIndex c{ix, iy};
        const bool inside = c == home_cell || horizontal_distance(f.center(c), around) <= radius_m;
        if (!inside) continue;
        const VoxelKey base = rm.key_of(f.center(c, rm.cruise_altitude_m()));
        refresh({base.dx, base.dy, dz});
      }
    }
  }
}

void csi_correct(RadioMap& rm, const Vec3& uav_pos, LinkState measured_state) {
  if (measured_state == LinkState::AssumedLoS) {
    throw std::invalid_argument("csi_correct: a measurement must be LoS or NLoS");
  }
  rm.assign(rm.key_of(uav_pos), measured_state);
}

namespace {

double capacity_from_gain(double tx_dbm, double gain_db, const ChannelParams& p) {
  if (!std::isfinite(gain_db)) return 0.0;
  const double snr = dbm_to_mw(tx_dbm + gain_db) / dbm_to_mw(noise_power_dbm(p));
  return capacity_bps(snr, p.bandwidth_hz);
}

}  // namespace

double estimated_uplink_capacity(const RadioMap& rm, const ExploredMap& explored, const VoxelKey& voxel) {
  const RadioEntry e = rm.evaluate(voxel, explored);
  return capacity_from_gain(rm.params().uav_tx_power_dbm, e.gain_db, rm.params());
}

double estimated_downlink_capacity(const RadioMap& rm, const ExploredMap& explored, const VoxelKey& voxel) {
  const RadioEntry e = rm.evaluate(voxel, explored);
  return capacity_from_gain(rm.params().bs_tx_power_dbm, e.gain_db, rm.params());
}

}  // namespace edgeflight
