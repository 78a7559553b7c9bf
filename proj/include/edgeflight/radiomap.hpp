#pragma once

#include <compare>
#include <map>
#include <optional>

#include "edgeflight/channel.hpp"
#include "edgeflight/geometry.hpp"
#include "edgeflight/grid.hpp"
#include "edgeflight/worldmap.hpp"

namespace edgeflight {

/// Voxel index in a BS-referenced grid: horizontal offset in cells from the
/// BS cell, vertical offset in layers from the cruise altitude.
struct VoxelKey {
  int dx = 0;
  int dy = 0;
  int dz = 0;

  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
  friend auto operator<=>(const VoxelKey&, const VoxelKey&) = default;
};

struct RadioEntry {
  LinkState state = LinkState::AssumedLoS;
  double gain_db = 0.0;
  bool sticky_nlos = false;

  friend bool operator==(const RadioEntry&, const RadioEntry&) = default;
};

struct RadioMapConfig {
  bool sticky_nlos = true;
  int update_margin_cells = 2;  // update radius = sensing range + this many cells
  int extra_layers = 0;         // layers materialized above and below cruise altitude
  double layer_height_m = 5.0;

  void validate() const;
};

/// Sparse table of link state and channel gain toward one base station.
class RadioMap {
 public:
  RadioMap(GridFrame frame, Vec3 bs, double cruise_altitude_m, ChannelParams params, RadioMapConfig cfg = {});

  const GridFrame& frame() const { return frame_; }
  const Vec3& bs() const { return bs_; }
  const ChannelParams& params() const { return params_; }
  const RadioMapConfig& config() const { return cfg_; }
  double cruise_altitude_m() const { return cruise_altitude_m_; }

  VoxelKey key_of(const Vec3& p) const;
  CellIndex cell_of(const VoxelKey& k) const;
  Vec3 center(const VoxelKey& k) const;
  bool in_bounds(const VoxelKey& k) const;

  const RadioEntry* find(const VoxelKey& k) const;
  const std::map<VoxelKey, RadioEntry>& entries() const { return entries_; }

  /// Gain implied by a state at a voxel: -path loss (unit antenna gains).
  double gain_for(const VoxelKey& k, LinkState s) const;

  /// Stored entry, or an on-demand classification against `explored` when absent.
  RadioEntry evaluate(const VoxelKey& k, const ExploredMap& explored) const;

  /// Writes an entry, honouring stickiness. Returns false when a sticky entry blocked the write.
  bool assign(const VoxelKey& k, LinkState s);

 private:
  GridFrame frame_;
  Vec3 bs_;
  CellIndex bs_cell_;
  double cruise_altitude_m_;
  ChannelParams params_;
  RadioMapConfig cfg_;
  std::map<VoxelKey, RadioEntry> entries_;
};

/// Map-based classification: Blocked -> NLoS, Clear -> LoS, CrossesUnknown -> AssumedLoS.
LinkState classify_link(const ExploredMap& explored, const Vec3& voxel_center, const Vec3& bs);

/// Re-evaluates every voxel whose center lies within `radius_m` (horizontal) of
/// `around`, plus the voxel containing `around`. Sticky NLoS entries are skipped.
void update_radio_map(RadioMap& rm, const ExploredMap& explored, const Vec3& around, double radius_m);

/// Overwrites the voxel holding the UAV with a measured state (LoS or NLoS).
/// Throws std::invalid_argument for AssumedLoS.
void csi_correct(RadioMap& rm, const Vec3& uav_pos, LinkState measured_state);

/// Uplink Shannon capacity from the voxel's gain; AssumedLoS priced as LoS; no
/// interference term.
double estimated_uplink_capacity(const RadioMap& rm, const ExploredMap& explored, const VoxelKey& voxel);

/// Serving-only downlink capacity from the same gain.
double estimated_downlink_capacity(const RadioMap& rm, const ExploredMap& explored, const VoxelKey& voxel);

}  // namespace edgeflight
