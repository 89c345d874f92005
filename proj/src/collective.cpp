#include "annealab/collective.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include "annealab/errors.hpp"
#include "annealab/rng.hpp"
#include "annealab/spectrum.hpp"
#include "annealab/textio.hpp"
#include "split_step.hpp"

namespace annealab {

namespace {

using Cplx = std::complex<double>;

void check_level_targets(const std::vector<TargetSet>& targets, int dim) {
  for (const auto& t : targets)
    for (auto k : t.states)
      if (k >= static_cast<std::uint64_t>(dim))
        throw DataError("target level set '" + t.label + "' references level " +
                        std::to_string(k) + " outside 0.." + std::to_string(dim - 1));
}

}  // namespace

CollectiveModel build_collective(int n, double j, double h) {
  if (n < 2) throw InfeasibleConfigError("build_collective: need n >= 2");
  CollectiveModel m;
  m.n = n;
  m.j = j;
  m.h = h;
  m.energies.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double q = 2.0 * k - n;
    m.energies[k] = -(j / (2.0 * n)) * (q * q - n) - h * q;
  }
  m.offdiag.resize(n);
  for (int k = 0; k < n; ++k)
    m.offdiag[k] = -std::sqrt(static_cast<double>(k + 1) * (n - k));
  return m;
}

CollectiveLevels lowest_levels(const CollectiveModel& model) {
  const auto& e = model.energies;
  int k_gs = 0;
  for (int k = 1; k <= model.n; ++k)
    if (e[k] < e[k_gs]) k_gs = k;
  int k_e1 = -1;
  for (int k = 0; k <= model.n; ++k) {
    if (k == k_gs) continue;
    if (e[k] <= e[k_gs] + kLevelTol)
      throw DataError("lowest_levels: degenerate classical ground level");
    if (k_e1 < 0 || e[k] < e[k_e1]) k_e1 = k;
  }
  if (k_e1 < 0) throw DataError("lowest_levels: single-level model");
  for (int k = 0; k <= model.n; ++k)
    if (k != k_gs && k != k_e1 && e[k] <= e[k_e1] + kLevelTol)
      throw DataError("lowest_levels: degenerate first excited level");
  return {k_gs, k_e1};
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::vector<double> row(n + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[j] += row[j - 1];
  return row[k];
}

QuantumState collective_initial_state(int n) {
  if (n < 2) throw InfeasibleConfigError("collective_initial_state: need n >= 2");
  QuantumState st;
  st.basis = BasisKind::Collective;
  st.amplitudes.resize(n + 1);
  if (n <= 55) {
    const double scale = std::pow(2.0, -0.5 * n);
    for (int k = 0; k <= n; ++k)
      st.amplitudes[k] = Cplx(std::sqrt(binomial(n, k)) * scale, 0.0);
  } else {
    // log-space to dodge overflow; renormalized below
    const double ln2 = std::log(2.0);
    for (int k = 0; k <= n; ++k) {
      const double lg =
          std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      st.amplitudes[k] = Cplx(std::exp(0.5 * (lg - n * ln2)), 0.0);
    }
  }
  st.amplitudes /= st.amplitudes.norm();
  return st;
}

namespace {

// Lowest eigenvector of the symmetric tridiagonal H(s); same tie-break
// policy as the dense path.
struct TridiagGroundSolver {
  explicit TridiagGroundSolver(int dim) : dim_(dim), d_(dim), e_(dim), w_(dim), z_(2 * dim) {}

  bool solve(const CollectiveModel& model, double a_coef, double b_coef,
             std::vector<double>& ground) {
    for (int k = 0; k < dim_; ++k) d_[k] = b_coef * model.energies[k];
    for (int k = 0; k + 1 < dim_; ++k) e_[k] = a_coef * model.offdiag[k];
    const lapack_int n = dim_;
    lapack_int found = 0;
    std::vector<lapack_int> isuppz(4);
    const lapack_int iu = std::min<lapack_int>(2, n);
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d_.data(), e_.data(),
                                     0.0, 0.0, 1, iu, 0.0, &found, w_.data(), z_.data(), n,
                                     isuppz.data());
    if (info != 0 || found < 1)
      throw IntegrationError("collective static: eigensolve failed (info=" +
                             std::to_string(info) + ")");
    const bool degenerate = found >= 2 && (w_[1] - w_[0]) <= kLevelTol;
    if (!degenerate) {
      ground.assign(z_.begin(), z_.begin() + dim_);
      fix_sign(ground);
      return false;
    }
    solve_degenerate(model, a_coef, b_coef, ground);
    return true;
  }

 private:
  void fix_sign(std::vector<double>& v) const {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0)
      for (auto& x : v) x = -x;
  }

  void solve_degenerate(const CollectiveModel& model, double a_coef, double b_coef,
                        std::vector<double>& ground) {
    for (int k = 0; k < dim_; ++k) d_[k] = b_coef * model.energies[k];
    for (int k = 0; k + 1 < dim_; ++k) e_[k] = a_coef * model.offdiag[k];
    const lapack_int n = dim_;
    std::vector<double> w(dim_), zfull(static_cast<std::size_t>(dim_) * dim_);
    std::vector<lapack_int> isuppz(2 * dim_);
    lapack_int found = 0;
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d_.data(), e_.data(),
                                     0.0, 0.0, 0, 0, 0.0, &found, w.data(), zfull.data(), n,
                                     isuppz.data());
    if (info != 0 || found < 1)
      throw IntegrationError("collective static: degenerate eigensolve failed");
    std::size_t best_col = 0;
    int best_first = dim_;
    for (lapack_int col = 0; col < found && w[col] <= w[0] + kLevelTol; ++col) {
      int first = dim_;
      for (int r = 0; r < dim_; ++r)
        if (std::abs(zfull[static_cast<std::size_t>(col) * dim_ + r]) > 1e-12) {
          first = r;
          break;
        }
      if (first < best_first) {
        best_first = first;
        best_col = col;
      }
    }
    ground.assign(zfull.begin() + best_col * dim_, zfull.begin() + (best_col + 1) * dim_);
    fix_sign(ground);
  }

  int dim_;
  std::vector<double> d_, e_, w_, z_;
};

}  // namespace

Trajectory collective_static_trajectory(const CollectiveModel& model,
                                        const std::vector<TargetSet>& targets,
                                        int grid_points) {
  if (grid_points < 2)
    throw DataError("collective_static_trajectory: need at least 2 grid points");
  check_level_targets(targets, model.dim());

  Trajectory traj;
  traj.grid.resize(grid_points);
  traj.series.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    traj.series[i].label = targets[i].label;
    traj.series[i].values.resize(grid_points);
  }

  const AnnealSchedule unit{1.0};
  TridiagGroundSolver solver(model.dim());
  std::vector<double> ground;
  int degenerate_points = 0;
  double first_degenerate_s = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    const double s = static_cast<double>(g) / (grid_points - 1);
    if (solver.solve(model, unit.a(s), unit.b(s), ground)) {
      if (degenerate_points == 0) first_degenerate_s = s;
      ++degenerate_points;
    }
    traj.grid[g] = s;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      double p = 0.0;
      for (auto k : targets[i].states) p += ground[k] * ground[k];
      traj.series[i].values[g] = p;
    }
  }
  if (degenerate_points > 0)
    traj.meta.warnings.push_back("degenerate instantaneous ground state at " +
                                 std::to_string(degenerate_points) +
                                 " grid points (first at s=" + csv_num(first_degenerate_s) +
                                 "); deterministic tie-break applied");

  traj.meta.tau_mode = "static";
  traj.meta.grid_points = grid_points;
  traj.meta.step_size = 0.0;
  traj.meta.prng_id = Rng::id();
  traj.meta.inter_point_variation = inter_point_variation(traj);
  return traj;
}

Trajectory collective_evolve(const CollectiveModel& model, const AnnealSchedule& schedule,
                             const std::vector<TargetSet>& targets, int grid_points,
                             double dt_override) {
  if (!(schedule.tau > 0)) throw IntegrationError("collective_evolve: tau must be positive");
  if (grid_points < 2) throw DataError("collective_evolve: need at least 2 grid points");
  const int dim = model.dim();
  check_level_targets(targets, dim);

  const double dt_target =
      dt_override > 0 ? dt_override : std::min(0.01, schedule.tau / 1e4);

  // The driver is s-independent up to the A(s) factor, so one symmetric
  // eigendecomposition gives its exact flow for any accumulated angle.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    T(k, k + 1) = model.offdiag[k];
    T(k + 1, k) = model.offdiag[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    throw IntegrationError("collective_evolve: driver eigendecomposition failed");
  const Eigen::MatrixXcd V = es.eigenvectors().cast<Cplx>();
  const Eigen::VectorXd lam = es.eigenvalues();

  Eigen::VectorXcd psi = collective_initial_state(model.n).amplitudes;
  Eigen::VectorXcd scratch(dim);

  Trajectory traj;
  traj.grid.resize(grid_points);
  traj.series.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    traj.series[i].label = targets[i].label;
    traj.series[i].values.resize(grid_points);
  }

  double step_in_use = 0.0;
  detail::run_split_evolution(
      schedule, dt_target, grid_points,
      [&](double theta) {
        scratch.noalias() = V.adjoint() * psi;
        for (int k = 0; k < dim; ++k)
          scratch[k] *= Cplx(std::cos(theta * lam[k]), -std::sin(theta * lam[k]));
        psi.noalias() = V * scratch;
      },
      [&](double w) {
        for (int k = 0; k < dim; ++k)
          psi[k] *= Cplx(std::cos(w * model.energies[k]), -std::sin(w * model.energies[k]));
      },
      [&](int g, double s, double h) {
        step_in_use = h;
        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > 1e-6)
          throw IntegrationError("collective_evolve: norm drifted to " + csv_num(norm) +
                                 " at s=" + csv_num(s) + " with step size " + csv_num(h));
        traj.grid[g] = s;
        for (std::size_t i = 0; i < targets.size(); ++i) {
          double p = 0.0;
          for (auto k : targets[i].states)
            p += std::norm(psi[static_cast<Eigen::Index>(k)]);
          traj.series[i].values[g] = p;
        }
      });

  traj.meta.tau_mode = csv_num(schedule.tau);
  traj.meta.grid_points = grid_points;
  traj.meta.step_size = step_in_use;
  traj.meta.prng_id = Rng::id();
  traj.meta.inter_point_variation = inter_point_variation(traj);
  return traj;
}

QuantumState expand_to_full(const QuantumState& state) {
  if (state.basis != BasisKind::Collective)
    throw DataError("expand_to_full: input is not in the collective basis");
  const int n = static_cast<int>(state.amplitudes.size()) - 1;
  if (n > 12)
    throw SizeCapError("expand_to_full: n=" + std::to_string(n) + " exceeds the cap of 12");
  QuantumState out;
  out.basis = BasisKind::Full;
  out.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
    const int k = n - std::popcount(z);  // up-spin count of z
    out.amplitudes[z] = state.amplitudes[k] / std::sqrt(binomial(n, k));
  }
  return out;
}

std::vector<std::uint64_t> level_states(int n, int k) {
  if (k < 0 || k > n) throw DataError("level_states: level outside 0..n");
  std::vector<std::uint64_t> out;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z)
    if (n - std::popcount(z) == k) out.push_back(z);
  return out;
}

}  // namespace annealab
