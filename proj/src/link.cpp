#include "edgeflight/link.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "edgeflight/worldmap.hpp"

namespace edgeflight {

double elevation_deg(const Vec3& uav, const Vec3& bs) {
  const double h = horizontal_distance(uav, bs);
  return rad_to_deg(std::atan2(std::abs(uav.z - bs.z), h));
}

double off_boresight_deg(const Vec3& uav, const Vec3& serving, const Vec3& other) {
  const Vec3 u = serving - uav;
  const Vec3 v = other - uav;
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
  return rad_to_deg(std::acos(c));
}

LinkSnapshot true_link(const Scenario& sc, const Vec3& uav, const ChannelParams& p) {
  LinkSnapshot s;
  const Vec3& serving = sc.serving();
  s.state = ray_blocked(sc.truth, serving, uav) == RayResult::Blocked ? LinkState::NLoS : LinkState::LoS;
  const double pl = path_loss_db(distance(uav, serving), s.state, p);

  const double noise_mw = dbm_to_mw(noise_power_dbm(p));
  s.uplink_snr = dbm_to_mw(received_power_dbm(p.uav_tx_power_dbm, pl, 0.0, 0.0)) / noise_mw;
  s.uplink_bps = capacity_bps(s.uplink_snr, p.bandwidth_hz);

  const double serving_rx = received_power_dbm(p.bs_tx_power_dbm, pl, 0.0, 0.0);
  std::vector<double> interferers;
  for (std::size_t b = 0; b < sc.bs_positions.size(); ++b) {
    if (static_cast<int>(b) == sc.serving_bs) continue;
    const Vec3& bs = sc.bs_positions[b];
    const LinkState st = ray_blocked(sc.truth, bs, uav) == RayResult::Blocked ? LinkState::NLoS : LinkState::LoS;
    const double gain = antenna_gain_db(off_boresight_deg(uav, serving, bs));
    interferers.push_back(received_power_dbm(p.bs_tx_power_dbm, path_loss_db(distance(uav, bs), st, p), 0.0, gain));
  }
  s.downlink_sinr = sinr_linear(serving_rx, interferers, p);
  s.downlink_bps = capacity_bps(s.downlink_sinr, p.bandwidth_hz);

  double i_mw = 0.0;
  for (double i : interferers) i_mw += dbm_to_mw(i);
  s.interference_share = i_mw / (dbm_to_mw(serving_rx) + i_mw);
  return s;
}

}  // namespace edgeflight
