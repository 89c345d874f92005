#include "annealab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "annealab/errors.hpp"
#include "annealab/textio.hpp"

namespace annealab {

SpectrumSummary summarize(const DiagonalProblem& diag) {
  if (diag.size() == 0) throw DataError("summarize: empty landscape");
  SpectrumSummary s;
  const auto& e = diag.energies;

  const double e_gs = *std::min_element(e.begin(), e.end());
  double e_e1 = std::numeric_limits<double>::infinity();
  for (double v : e)
    if (v > e_gs + kLevelTol && v < e_e1) e_e1 = v;
  if (!std::isfinite(e_e1))
    throw DataError("summarize: all states sit in one energy level");
  for (std::uint64_t z = 0; z < diag.size(); ++z) {
    if (e[z] <= e_gs + kLevelTol)
      s.gs_states.push_back(z);
    else if (std::abs(e[z] - e_e1) <= kLevelTol)
      s.e1_states.push_back(z);
  }
  s.e_gs = e_gs;
  s.e_e1 = e_e1;
  s.delta_e_hc = e_e1 - e_gs;

  double feas = std::numeric_limits<double>::infinity();
  double infeas = std::numeric_limits<double>::infinity();
  for (std::uint64_t z = 0; z < diag.size(); ++z) {
    if (diag.feasible[z])
      feas = std::min(feas, e[z]);
    else
      infeas = std::min(infeas, e[z]);
  }
  if (std::isfinite(feas)) s.e_feas_min = feas;
  if (std::isfinite(infeas)) s.e_infeas_min = infeas;
  if (s.e_feas_min && s.e_infeas_min) s.delta_e_f = *s.e_infeas_min - *s.e_feas_min;
  return s;
}

std::string SpectrumSummary::csv_header() {
  return "instance_id,e_gs,e_e1,delta_e_hc,e_feas_min,e_infeas_min,delta_e_f";
}

std::string SpectrumSummary::csv_row(const std::string& instance_id) const {
  auto opt = [](const std::optional<double>& v) { return v ? csv_num(*v) : std::string(); };
  return instance_id + "," + csv_num(e_gs) + "," + csv_num(e_e1) + "," + csv_num(delta_e_hc) +
         "," + opt(e_feas_min) + "," + opt(e_infeas_min) + "," + opt(delta_e_f);
}

double mu_star(const DiagonalProblem& diag, double lambda) {
  double f_feas_min = std::numeric_limits<double>::infinity();
  for (std::uint64_t z = 0; z < diag.size(); ++z)
    if (diag.feasible[z]) f_feas_min = std::min(f_feas_min, diag.objectives[z]);
  if (!std::isfinite(f_feas_min))
    throw InfeasibleConfigError("mu_star: landscape has no feasible states");

  bool any_infeasible = false;
  double best = 0.0;
  for (std::uint64_t z = 0; z < diag.size(); ++z) {
    if (diag.feasible[z]) continue;
    any_infeasible = true;
    const double c = diag.constraints[z];
    const double cand = 2.0 * (f_feas_min - diag.objectives[z] + lambda * c) / (c * c);
    best = std::max(best, cand);
  }
  if (!any_infeasible)
    throw InfeasibleConfigError("mu_star: landscape has no infeasible states");
  return best;
}

double mu_star(const GbpInstance& inst, double lambda) {
  return mu_star(build_diagonal(inst), lambda);
}
double mu_star(const QkpInstance& inst, double lambda) {
  return mu_star(build_diagonal(inst), lambda);
}

namespace {

double bisect_root(const DiagonalProblem& diag, double target, double a, double b, double ga,
                   double gb) {
  // ga, gb have opposite signs; shrink to 1e-9 width.
  for (int it = 0; it < 200 && (b - a) > 1e-9; ++it) {
    const double mid = 0.5 * (a + b);
    const double gm = mu_star(diag, mid) - target;
    if (gm == 0.0) return mid;
    if ((ga < 0) != (gm < 0)) {
      b = mid;
      gb = gm;
    } else {
      a = mid;
      ga = gm;
    }
  }
  (void)gb;
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> calibrate_lambda(const DiagonalProblem& diag, double target_mu_star,
                                     double lo, double hi) {
  if (!(lo < hi)) throw CalibrationError("calibrate_lambda: empty interval");
  const double step = 1e-3;
  const int cells = static_cast<int>(std::ceil((hi - lo) / step));
  std::vector<double> roots;
  double prev_x = lo;
  double prev_g = mu_star(diag, lo) - target_mu_star;
  if (prev_g == 0.0) roots.push_back(lo);
  for (int k = 1; k <= cells; ++k) {
    const double x = std::min(lo + k * step, hi);
    const double g = mu_star(diag, x) - target_mu_star;
    if (g == 0.0) {
      roots.push_back(x);
    } else if ((prev_g < 0) != (g < 0) && prev_g != 0.0) {
      roots.push_back(bisect_root(diag, target_mu_star, prev_x, x, prev_g, g));
    }
    prev_x = x;
    prev_g = g;
  }
  // Collapse duplicate hits; runs of grid-adjacent roots (a flat stretch at
  // the target) reduce to their endpoints, at grid resolution.
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i;
    while (j + 1 < roots.size() && roots[j + 1] - roots[j] <= 1.5 * step) ++j;
    out.push_back(roots[i]);
    if (roots[j] - roots[i] > 1e-9) out.push_back(roots[j]);
    i = j + 1;
  }
  if (out.empty())
    throw CalibrationError("calibrate_lambda: no lambda in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "] reaches the target penalty weight");
  return out;
}

DiagonalProblem permute_spectrum(const DiagonalProblem& diag, std::uint64_t gs_state,
                                 std::uint64_t e1_state) {
  if (diag.kind != ProblemKind::Ising)
    throw DataError("permute_spectrum: only unconstrained landscapes can be reassigned");
  const std::uint64_t dim = diag.size();
  if (gs_state >= dim || e1_state >= dim || gs_state == e1_state)
    throw DataError("permute_spectrum: invalid target states");

  std::vector<double> sorted = diag.energies;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] <= kLevelTol)
      throw DataError("permute_spectrum: spectrum has degenerate levels");

  DiagonalProblem out = diag;
  out.energies.assign(dim, 0.0);
  out.energies[gs_state] = sorted[0];
  out.energies[e1_state] = sorted[1];
  std::size_t next = 2;
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (z == gs_state || z == e1_state) continue;
    out.energies[z] = sorted[next++];
  }
  out.objectives = out.energies;  // unconstrained: objective equals energy
  out.optimal.assign(dim, 0);
  out.optimal[gs_state] = 1;
  return out;
}

}  // namespace annealab
