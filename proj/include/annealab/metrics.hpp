#pragma once

#include <string>
#include <vector>

namespace annealab {

// Detour score of one probability-vs-s series:
//   chi = 1/(1 - P(0)),  q_d = chi * (P_max - P(0)) * (P_max - P(1)).
// Lives in [0,1]; zero iff the series never rises above its start or ends
// at its maximum.
struct QdReport {
  double p0 = 0.0;
  double p_max = 0.0;
  double s_max = 0.0;  // earliest grid point achieving p_max
  double p_end = 0.0;
  double chi = 0.0;
  double qd = 0.0;

  static std::string csv_header();
  std::string csv_row(const std::string& instance_id, const std::string& label,
                      const std::string& tau_mode) const;
};

QdReport compute_qd(const std::vector<double>& grid, const std::vector<double>& probs);

struct Bin {
  double center = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::size_t count = 0;
};

// Half-open bins [k*w, (k+1)*w) with k = floor(x/w); empty bins are omitted
// and the result is sorted by center.
std::vector<Bin> bin_aggregate(const std::vector<double>& xs, const std::vector<double>& ys,
                               double width);

// Spearman rank correlation with average ranks on ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace annealab
