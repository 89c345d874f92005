#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace annealab {

// One tracked probability series over the s grid.
struct Series {
  std::string label;
  std::vector<double> values;
};

struct TrajectoryMeta {
  std::string instance_id;
  std::string tau_mode;  // "static" or the value of tau
  std::size_t grid_points = 0;
  double step_size = 0.0;  // 0 for static trajectories
  std::uint64_t seed = 0;
  std::string prng_id;
  // Largest jump between adjacent recorded points, across all series; the
  // grid-induced underestimate of any max_s P is bounded by this.
  double inter_point_variation = 0.0;
  std::vector<std::string> warnings;
};

struct Trajectory {
  std::vector<double> grid;  // sorted s values including 0 and 1
  std::vector<Series> series;
  TrajectoryMeta meta;

  // Header `s,<label1>,...`, one row per grid point, 12 significant digits.
  std::string csv() const;
  // JSON sidecar with the metadata fields above.
  std::string meta_json() const;

  const Series& find(const std::string& label) const;
};

// Recomputes the largest adjacent-point jump over all series.
double inter_point_variation(const Trajectory& t);

void write_trajectory(const std::string& path_base, const Trajectory& t);

}  // namespace annealab
