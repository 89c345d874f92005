#include "annealab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "annealab/errors.hpp"
#include "annealab/textio.hpp"

namespace annealab {

QdReport compute_qd(const std::vector<double>& grid, const std::vector<double>& probs) {
  if (grid.size() != probs.size() || grid.size() < 2)
    throw DataError("compute_qd: need a grid and a probability series of equal length >= 2");
  for (double p : probs)
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9))
      throw DataError("compute_qd: probability outside [0,1]: " + csv_num(p));

  QdReport r;
  r.p0 = probs.front();
  r.p_end = probs.back();
  std::size_t arg = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[arg]) arg = i;  // strict: ties keep the earliest point
  r.p_max = probs[arg];
  r.s_max = grid[arg];
  if (r.p0 >= 1.0)
    throw DataError("compute_qd: P(0) = 1 leaves the rescaling factor undefined");
  r.chi = 1.0 / (1.0 - r.p0);
  r.qd = r.chi * (r.p_max - r.p0) * (r.p_max - r.p_end);
  return r;
}

std::string QdReport::csv_header() {
  return "instance_id,label,tau_mode,p0,p_max,s_max,p_end,chi,qd";
}

std::string QdReport::csv_row(const std::string& instance_id, const std::string& label,
                              const std::string& tau_mode) const {
  return instance_id + "," + label + "," + tau_mode + "," + csv_num(p0) + "," +
         csv_num(p_max) + "," + csv_num(s_max) + "," + csv_num(p_end) + "," + csv_num(chi) +
         "," + csv_num(qd);
}

std::vector<Bin> bin_aggregate(const std::vector<double>& xs, const std::vector<double>& ys,
                               double width) {
  if (xs.size() != ys.size()) throw DataError("bin_aggregate: length mismatch");
  if (!(width > 0)) throw DataError("bin_aggregate: bin width must be positive");
  std::map<long long, std::vector<double>> groups;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long long k = static_cast<long long>(std::floor(xs[i] / width));
    groups[k].push_back(ys[i]);
  }
  std::vector<Bin> bins;
  bins.reserve(groups.size());
  for (const auto& [k, vals] : groups) {
    Bin b;
    b.center = (k + 0.5) * width;
    b.count = vals.size();
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    b.mean = mean;
    b.stddev = std::sqrt(var / vals.size());
    bins.push_back(b);
  }
  return bins;  // std::map iteration is already center-sorted
}

namespace {

// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("spearman: length mismatch");
  if (a.size() < 3) throw DataError("spearman: need at least 3 pairs");
  const auto all_equal = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (all_equal(a) || all_equal(b))
    throw DataError("spearman: a constant series has no rank correlation");

  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - ma;
    const double db = rb[i] - mb;
    num += da * db;
    va += da * da;
    vb += db * db;
  }
  return num / std::sqrt(va * vb);
}

}  // namespace annealab
