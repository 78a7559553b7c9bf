#include "edgeflight/gridio.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "edgeflight/errors.hpp"

namespace edgeflight {

namespace {

struct GridHeader {
  GridFrame frame;
  double sentinel = kUnknownHeight;
};

void write_header(std::ostream& out, const GridFrame& f, const Provenance& prov) {
  out << prov.header_line() << '\n';
  out << fmt::format("grid {} {} {} {}\n", f.width, f.depth, format_number(f.cell_size_m),
                     format_number(kUnknownHeight));
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  throw ConfigError("grid file ended early");
}

GridHeader read_header(std::istream& in) {
  std::istringstream ss(next_content_line(in));
  std::string tag;
  GridHeader h;
  ss >> tag >> h.frame.width >> h.frame.depth >> h.frame.cell_size_m >> h.sentinel;
  if (!ss || tag != "grid" || h.frame.width <= 0 || h.frame.depth <= 0 || !(h.frame.cell_size_m > 0.0)) {
    throw ConfigError("malformed grid header");
  }
  return h;
}

std::vector<double> read_values(std::istream& in, const GridFrame& f) {
  std::vector<double> v;
  v.reserve(f.cell_count());
  for (int iy = 0; iy < f.depth; ++iy) {
    std::istringstream ss(next_content_line(in));
    for (int ix = 0; ix < f.width; ++ix) {
      double x = 0.0;
      if (!(ss >> x)) throw ConfigError(fmt::format("grid row {} is short", iy));
      v.push_back(x);
    }
  }
  return v;
}

void write_rows(std::ostream& out, const GridFrame& f, const auto& value_of) {
  for (int iy = 0; iy < f.depth; ++iy) {
    for (int ix = 0; ix < f.width; ++ix) {
      if (ix) out << ' ';
      out << format_number(value_of(CellIndex{ix, iy}));
    }
    out << '\n';
  }
}

nlohmann::ordered_json vec_json(const Vec3& p) { return nlohmann::ordered_json::array({p.x, p.y, p.z}); }

Vec3 json_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element position");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void write_height_grid(std::ostream& out, const HeightField& field, const Provenance& prov) {
  write_header(out, field.frame(), prov);
  write_rows(out, field.frame(), [&](CellIndex c) { return field.at(c); });
}

HeightField read_height_grid(std::istream& in) {
  const GridHeader h = read_header(in);
  try {
    return HeightField(h.frame, read_values(in, h.frame));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void write_explored_grid(std::ostream& out, const ExploredMap& map, const Provenance& prov) {
  write_header(out, map.frame(), prov);
  write_rows(out, map.frame(), [&](CellIndex c) { return map.height(c).value_or(kUnknownHeight); });
}

ExploredMap read_explored_grid(std::istream& in) {
  const GridHeader h = read_header(in);
  const std::vector<double> v = read_values(in, h.frame);
  ExploredMap m(h.frame);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != h.sentinel) m.reveal(h.frame.from_linear(i), v[i]);
  }
  return m;
}

void write_scenario(const std::filesystem::path& dir, const Scenario& sc, const Provenance& prov) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "city.grid", std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", (dir / "city.grid").string()));
    write_height_grid(out, sc.truth, prov);
  }
  nlohmann::ordered_json j;
  j["provenance"] = prov.header_line().substr(2);
  j["uav_altitude_m"] = sc.uav_altitude_m;
  j["serving_bs"] = sc.serving_bs;
  j["start"] = vec_json(sc.start);
  j["goal"] = vec_json(sc.goal);
  j["bs_positions"] = nlohmann::ordered_json::array();
  for (const Vec3& b : sc.bs_positions) j["bs_positions"].push_back(vec_json(b));
  std::ofstream out(dir / "scenario.json", std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", (dir / "scenario.json").string()));
  out << j.dump(2) << '\n';
}

Scenario read_scenario(const std::filesystem::path& dir) {
  Scenario sc;
  {
    std::ifstream in(dir / "city.grid");
    if (!in) throw ConfigError(fmt::format("cannot open '{}'", (dir / "city.grid").string()));
    sc.truth = read_height_grid(in);
  }
  std::ifstream in(dir / "scenario.json");
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", (dir / "scenario.json").string()));
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    sc.uav_altitude_m = j.at("uav_altitude_m").get<double>();
    sc.serving_bs = j.at("serving_bs").get<int>();
    sc.start = json_vec(j.at("start"));
    sc.goal = json_vec(j.at("goal"));
    for (const auto& b : j.at("bs_positions")) sc.bs_positions.push_back(json_vec(b));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed scenario file: {}", e.what()));
  }
  if (sc.serving_bs < 0 || static_cast<std::size_t>(sc.serving_bs) >= sc.bs_positions.size()) {
    throw ConfigError("serving_bs out of range");
  }
  return sc;
}

}  // namespace edgeflight
