#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "edgeflight/radiomap.hpp"
#include "edgeflight/simcore.hpp"
#include "edgeflight/worldmap.hpp"

namespace edgeflight {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// First line of every output file.
struct Provenance {
  std::string config_digest;
  std::uint64_t seed = 0;

  std::string header_line() const;  // "# edgeflight <version> config_digest=<hex> seed=<n>"
};

/// Per-episode metrics, one row per (episode, planner).
void write_metrics_csv(std::ostream& out, const std::vector<EpisodeRow>& rows, const Provenance& prov);

/// Batch aggregate: totals and means per planner.
void write_aggregate_csv(std::ostream& out, const std::vector<KindAggregate>& aggs, const Provenance& prov);

/// One row per tick.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, const Provenance& prov);

/// Cruise-altitude slice of the radio map: a gain grid (dB) followed by a state
/// grid (L/N/A), rows from y = 0 upward. Cells without a stored entry are
/// classified against `explored` on demand.
void write_radiomap_slice(std::ostream& out, const RadioMap& rm, const ExploredMap& explored, const Provenance& prov);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace edgeflight
