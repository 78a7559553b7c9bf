#pragma once

#include <filesystem>
#include <iosfwd>

#include "edgeflight/export.hpp"
#include "edgeflight/scenario.hpp"
#include "edgeflight/worldmap.hpp"

namespace edgeflight {

/// Plain-text grid:
///   # provenance line
///   grid <width> <depth> <cell_size_m> <unknown_sentinel>
///   <depth> rows of <width> heights, row 0 is y = 0
/// Unknown cells (explored maps only) hold the sentinel.
inline constexpr double kUnknownHeight = -1.0;

void write_height_grid(std::ostream& out, const HeightField& field, const Provenance& prov);
HeightField read_height_grid(std::istream& in);

void write_explored_grid(std::ostream& out, const ExploredMap& map, const Provenance& prov);
ExploredMap read_explored_grid(std::istream& in);

/// <dir>/city.grid and <dir>/scenario.json.
void write_scenario(const std::filesystem::path& dir, const Scenario& sc, const Provenance& prov);
Scenario read_scenario(const std::filesystem::path& dir);

}  // namespace edgeflight
