#include "edgeflight/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "edgeflight/errors.hpp"
#include "edgeflight/geometry.hpp"

namespace edgeflight {

std::string_view to_string(LinkState s) {
  switch (s) {
    case LinkState::LoS: return "LoS";
    case LinkState::NLoS: return "NLoS";
    case LinkState::AssumedLoS: return "AssumedLoS";
  }
  return "?";
}

char state_code(LinkState s) {
  switch (s) {
    case LinkState::LoS: return 'L';
    case LinkState::NLoS: return 'N';
    case LinkState::AssumedLoS: return 'A';
  }
  return '?';
}

void ChannelParams::validate() const {
  if (!(carrier_hz > 0.0)) throw ConfigError("channel.carrier_hz must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("channel.bandwidth_hz must be positive");
  if (!(uav_tx_power_dbm > 0.0) || !(bs_tx_power_dbm > 0.0)) throw ConfigError("channel transmit powers must be positive");
  if (!(noise_figure_db > 0.0)) throw ConfigError("channel.noise_figure_db must be positive");
  if (!(nlos_excess_db >= 0.0)) throw ConfigError("channel.nlos_excess_db must be >= 0");
  if (!(plos_a > 0.0) || !(plos_b > 0.0)) throw ConfigError("channel plos constants must be positive");
}

double path_loss_db(double distance_m, LinkState state, const ChannelParams& p) {
  if (!(distance_m > 0.0)) throw std::domain_error("path_loss_db: distance must be positive");
  const double fspl = 20.0 * std::log10(distance_m) + 20.0 * std::log10(p.carrier_hz) +
                      20.0 * std::log10(4.0 * kPi / kSpeedOfLight);
  return state == LinkState::NLoS ? fspl + p.nlos_excess_db : fspl;
}

double plos_probability(double elevation_deg, const ChannelParams& p) {
  return 1.0 / (1.0 + p.plos_a * std::exp(-p.plos_b * (elevation_deg - p.plos_a)));
}

double expected_path_loss_db(double distance_m, double elevation_deg, const ChannelParams& p) {
  const double plos = plos_probability(elevation_deg, p);
  return plos * path_loss_db(distance_m, LinkState::LoS, p) + (1.0 - plos) * path_loss_db(distance_m, LinkState::NLoS, p);
}

double antenna_gain_db(double off_boresight_deg) {
  return std::abs(off_boresight_deg) <= 60.0 ? 0.0 : -10.0;
}

double noise_power_dbm(const ChannelParams& p) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(p.bandwidth_hz) + p.noise_figure_db;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double sinr_linear(double serving_rx_dbm, std::span<const double> interferer_rx_dbm, const ChannelParams& p) {
  double denom = dbm_to_mw(noise_power_dbm(p));
  for (double i : interferer_rx_dbm) denom += dbm_to_mw(i);
  return dbm_to_mw(serving_rx_dbm) / denom;
}

double capacity_bps(double sinr, double bandwidth_hz) {
  return bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace edgeflight
