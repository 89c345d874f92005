#include "annealab/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "annealab/errors.hpp"
#include "annealab/textio.hpp"

namespace annealab {

std::string Trajectory::csv() const {
  std::ostringstream out;
  out << "s";
  for (const auto& ser : series) out << "," << ser.label;
  out << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << csv_num(grid[i]);
    for (const auto& ser : series) out << "," << csv_num(ser.values[i]);
    out << "\n";
  }
  return out.str();
}

std::string Trajectory::meta_json() const {
  nlohmann::json j;
  j["instance_id"] = meta.instance_id;
  j["tau"] = meta.tau_mode;
  j["grid_points"] = meta.grid_points;
  j["step_size"] = meta.step_size;
  j["seed"] = meta.seed;
  j["prng_id"] = meta.prng_id;
  j["inter_point_variation"] = meta.inter_point_variation;
  j["warnings"] = meta.warnings;
  return j.dump(2);
}

const Series& Trajectory::find(const std::string& label) const {
  for (const auto& ser : series)
    if (ser.label == label) return ser;
  throw DataError("trajectory has no series labeled '" + label + "'");
}

double inter_point_variation(const Trajectory& t) {
  double v = 0.0;
  for (const auto& ser : t.series)
    for (std::size_t i = 1; i < ser.values.size(); ++i)
      v = std::max(v, std::abs(ser.values[i] - ser.values[i - 1]));
  return v;
}

void write_trajectory(const std::string& path_base, const Trajectory& t) {
  {
    std::ofstream out(path_base + ".csv", std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path_base + ".csv");
    out << t.csv();
  }
  {
    std::ofstream out(path_base + ".meta.json", std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path_base + ".meta.json");
    out << t.meta_json() << "\n";
  }
}

}  // namespace annealab
