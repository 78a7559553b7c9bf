#include "edgeflight/export.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace edgeflight {

std::string Provenance::header_line() const {
  return fmt::format("# edgeflight {} config_digest={} seed={}", kToolVersion, config_digest, seed);
}

std::string format_number(double v) { return fmt::format("{}", v); }

void write_metrics_csv(std::ostream& out, const std::vector<EpisodeRow>& rows, const Provenance& prov) {
  out << prov.header_line() << '\n';
  out << "episode,scenario_seed,planner,flight_distance_m,flight_duration_s,avg_uplink_capacity_mbps,"
         "nlos_distance_ratio,stuck\n";
  for (const EpisodeRow& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{}\n", r.episode, r.seed, to_string(r.kind),
                       format_number(r.metrics.flight_distance_m), format_number(r.metrics.flight_duration_s),
                       format_number(r.metrics.avg_uplink_capacity_bps / 1e6),
                       format_number(r.metrics.nlos_distance_ratio), r.metrics.stuck ? 1 : 0);
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<KindAggregate>& aggs, const Provenance& prov) {
  out << prov.header_line() << '\n';
  out << "planner,episodes,total_flight_distance_m,total_flight_duration_s,avg_uplink_capacity_mbps,"
         "nlos_distance_ratio,mean_flight_distance_m,mean_flight_duration_s,stuck\n";
  for (const KindAggregate& a : aggs) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(a.kind), a.episodes,
                       format_number(a.total_distance_m), format_number(a.total_duration_s),
                       format_number(a.mean_uplink_capacity_bps / 1e6), format_number(a.mean_nlos_ratio),
                       format_number(a.mean_distance_m), format_number(a.mean_duration_s), a.stuck);
  }
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, const Provenance& prov) {
  out << prov.header_line() << '\n';
  out << "time_s,x_m,y_m,z_m,speed_mps,true_state,est_state,uplink_mbps,downlink_sinr_db,mode,speed_limit_mps\n";
  for (const LogRecord& r : log) {
    const double sinr_db = 10.0 * std::log10(r.downlink_sinr);
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", format_number(r.time_s), format_number(r.position.x),
                       format_number(r.position.y), format_number(r.position.z), format_number(r.speed_mps),
                       to_string(r.true_state), to_string(r.est_state), format_number(r.uplink_bps / 1e6),
                       format_number(sinr_db), to_string(r.mode), format_number(r.speed_limit_mps));
  }
}

void write_radiomap_slice(std::ostream& out, const RadioMap& rm, const ExploredMap& explored, const Provenance& prov) {
  const GridFrame& f = rm.frame();
  const double alt = rm.cruise_altitude_m();
  out << prov.header_line() << '\n';
  out << fmt::format("radiomap {} {} {} altitude_m={}\n", f.width, f.depth, format_number(f.cell_size_m),
                     format_number(alt));
  std::vector<RadioEntry> slice(f.cell_count());
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      const CellIndex c{ix, iy};
      slice[f.linear(c)] = rm.evaluate(rm.key_of(f.center(c, alt)), explored);
    }
  }
  out << "gain_db\n";
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      if (ix) out << ',';
      out << format_number(slice[f.linear({ix, iy})].gain_db);
    }
    out << '\n';
  }
  out << "state\n";
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      if (ix) out << ',';
      out << state_code(slice[f.linear({ix, iy})].state);
    }
    out << '\n';
  }
}

}  // namespace edgeflight
