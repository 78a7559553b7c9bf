#pragma once

#include <span>
#include <string_view>

namespace edgeflight {

enum class LinkState { LoS, NLoS, AssumedLoS };

std::string_view to_string(LinkState s);
/// Single-letter code used in exported grids and logs: L, N, A.
char state_code(LinkState s);

struct ChannelParams {
  double carrier_hz = 2.0e9;
  double bandwidth_hz = 1.0e6;
  double uav_tx_power_dbm = 30.0;
  double bs_tx_power_dbm = 30.0;
  double noise_figure_db = 9.0;
  double nlos_excess_db = 20.0;
  double plos_a = 9.61;
  double plos_b = 0.16;

  void validate() const;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/// Free-space loss plus a constant NLoS excess. AssumedLoS is priced as LoS.
/// Throws std::domain_error for non-positive distance.
double path_loss_db(double distance_m, LinkState state, const ChannelParams& p);

/// Elevation-angle LoS probability 1 / (1 + a exp(-b (theta - a))).
double plos_probability(double elevation_deg, const ChannelParams& p);

/// P_LoS * PL_LoS + (1 - P_LoS) * PL_NLoS, averaged in dB.
double expected_path_loss_db(double distance_m, double elevation_deg, const ChannelParams& p);

inline double received_power_dbm(double tx_dbm, double pl_db, double tx_gain_db, double rx_gain_db) {
  return tx_dbm + tx_gain_db + rx_gain_db - pl_db;
}

/// UAV antenna: 0 dB within +-60 degrees of boresight, -10 dB outside.
double antenna_gain_db(double off_boresight_deg);

double noise_power_dbm(const ChannelParams& p);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Linear SINR of the serving signal against noise plus the sum of interferers.
double sinr_linear(double serving_rx_dbm, std::span<const double> interferer_rx_dbm, const ChannelParams& p);

/// Shannon capacity B log2(1 + sinr).
double capacity_bps(double sinr, double bandwidth_hz);

}  // namespace edgeflight
