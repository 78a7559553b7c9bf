#pragma once

#include "edgeflight/channel.hpp"
#include "edgeflight/geometry.hpp"
#include "edgeflight/scenario.hpp"

namespace edgeflight {

/// Elevation of `uav` seen from `bs`, degrees in [0, 90].
double elevation_deg(const Vec3& uav, const Vec3& bs);

/// Angle at the UAV between the serving-BS boresight and the direction to `other`.
double off_boresight_deg(const Vec3& uav, const Vec3& serving, const Vec3& other);

/// Ground-truth serving link at a UAV position.
struct LinkSnapshot {
  LinkState state = LinkState::LoS;
  double uplink_snr = 0.0;          // linear; no interference at the serving BS
  double uplink_bps = 0.0;
  double downlink_sinr = 0.0;       // linear; all non-serving BSs transmit
  double downlink_bps = 0.0;
  double interference_share = 0.0;  // I / (S + I) on the downlink, in [0, 1)
};

LinkSnapshot true_link(const Scenario& sc, const Vec3& uav, const ChannelParams& p);

}  // namespace edgeflight
