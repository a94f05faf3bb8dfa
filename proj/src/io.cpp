#include "corner_euler/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace corner_euler {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_trajectory_csv(std::ostream& os, std::span<const Trajectory> trajectories, bool header) {
  if (header) os << "t,id,kind,y1,y2,x1,x2\n";
  for (const Trajectory& tr : trajectories) {
    const std::string kind = tr.kind == PointKind::tracer ? "tracer" : "particle";
    for (std::size_t j = 0; j < tr.times.size(); ++j) {
      const Vec2 y = tr.disk_positions[j];
      const Vec2 x = tr.physical_positions[j];
      os << format_double(tr.times[j]) << ',' << tr.id << ',' << csv_field(kind) << ','
         << format_double(y.x) << ',' << format_double(y.y) << ',' << format_double(x.x) << ','
         << format_double(x.y) << '\n';
    }
  }
}

void write_vorticity_csv(std::ostream& os, const DiskVorticity& vort) {
  os << "z1,z2,w\n";
  for (std::size_t i = 0; i < vort.size(); ++i) {
    os << format_double(vort.x[i]) << ',' << format_double(vort.y[i]) << ','
       << format_double(vort.w[i]) << '\n';
  }
}

std::string snapshot_json(double t, std::span<const Vec2> positions, std::span<const double> weights) {
  if (positions.size() != weights.size()) {
    throw std::invalid_argument("snapshot_json: positions and weights differ in length");
  }
  nlohmann::ordered_json j;
  j["t"] = t;
  auto& arr = j["particles"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    arr.push_back({positions[i].x, positions[i].y, weights[i]});
  }
  return j.dump();
}

}  // namespace corner_euler
