#include "annealab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "annealab/errors.hpp"
#include "annealab/rng.hpp"
#include "annealab/spectrum.hpp"
#include "annealab/textio.hpp"
#include "split_step.hpp"

namespace annealab {

namespace {

using Cplx = std::complex<double>;

void check_targets(const std::vector<TargetSet>& targets, std::uint64_t dim) {
  for (const auto& t : targets)
    for (auto z : t.states)
      if (z >= dim) throw DataError("target set '" + t.label + "' references state " +
                                    std::to_string(z) + " outside the basis");
}

double target_probability(const Eigen::VectorXcd& psi, const TargetSet& t) {
  double p = 0.0;
  for (auto z : t.states) p += std::norm(psi[static_cast<Eigen::Index>(z)]);
  return p;
}

// In-place exp(+i theta sigma^x) on every qubit; this is the flow of the
// driver part over accumulated angle theta.
void driver_rotate(Eigen::VectorXcd& psi, int m, double theta) {
  const double c = std::cos(theta);
  const Cplx is(0.0, std::sin(theta));
  const std::uint64_t dim = psi.size();
  for (int i = 0; i < m; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t z = 0; z < dim; ++z) {
      if (z & bit) continue;
      const Cplx u = psi[z];
      const Cplx v = psi[z | bit];
      psi[z] = c * u + is * v;
      psi[z | bit] = is * u + c * v;
    }
  }
}

// In-place exp(-i w E(z)) per basis state; the flow of the problem part.
void phase_rotate(Eigen::VectorXcd& psi, const std::vector<double>& energies, double w) {
  for (std::uint64_t z = 0; z < energies.size(); ++z)
    psi[z] *= Cplx(std::cos(w * energies[z]), -std::sin(w * energies[z]));
}

struct EvolveResult {
  Trajectory traj;
  Eigen::VectorXcd final_amps;
};

EvolveResult run_evolution(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                           const std::vector<TargetSet>& targets, int grid_points,
                           double dt_override, bool record_series) {
  if (!(schedule.tau > 0)) throw IntegrationError("evolve: tau must be positive");
  if (grid_points < 2) throw DataError("evolve: need at least 2 grid points");
  const std::uint64_t dim = diag.size();
  check_targets(targets, dim);

  const double dt_target =
      dt_override > 0 ? dt_override : std::min(0.01, schedule.tau / 1e4);

  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Constant(dim, Cplx(std::pow(2.0, -0.5 * diag.m), 0.0));

  EvolveResult res;
  Trajectory& traj = res.traj;
  traj.grid.resize(grid_points);
  if (record_series) {
    traj.series.resize(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      traj.series[i].label = targets[i].label;
      traj.series[i].values.resize(grid_points);
    }
  }

  double step_in_use = 0.0;
  detail::run_split_evolution(
      schedule, dt_target, grid_points,
      [&](double theta) { driver_rotate(psi, diag.m, theta); },
      [&](double w) { phase_rotate(psi, diag.energies, w); },
      [&](int k, double s, double h) {
        step_in_use = h;
        const double norm = psi.norm();
        if (std::abs(norm - 1.0) > 1e-6)
          throw IntegrationError("evolve: norm drifted to " + csv_num(norm) + " at s=" +
                                 csv_num(s) + " with step size " + csv_num(h));
        traj.grid[k] = s;
        if (record_series)
          for (std::size_t i = 0; i < targets.size(); ++i)
            traj.series[i].values[k] = target_probability(psi, targets[i]);
      });

  traj.meta.tau_mode = csv_num(schedule.tau);
  traj.meta.grid_points = grid_points;
  traj.meta.step_size = step_in_use;
  traj.meta.prng_id = Rng::id();
  traj.meta.inter_point_variation = inter_point_variation(traj);
  res.final_amps = std::move(psi);
  return res;
}

}  // namespace

void QuantumState::check_norm() const {
  const double n = norm();
  if (std::abs(n - 1.0) > 1e-6)
    throw DataError("quantum state norm " + csv_num(n) + " violates normalization");
}

QuantumState initial_state(int m, int cap) {
  if (m < 1) throw SizeCapError("initial_state: need at least one variable");
  if (m > cap)
    throw SizeCapError("initial_state: 2^" + std::to_string(m) + " exceeds cap 2^" +
                       std::to_string(cap));
  QuantumState st;
  st.basis = BasisKind::Full;
  st.amplitudes =
      Eigen::VectorXcd::Constant(std::int64_t{1} << m, Cplx(std::pow(2.0, -0.5 * m), 0.0));
  return st;
}

QuantumState apply_hamiltonian(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                               double s, const QuantumState& state) {
  const std::uint64_t dim = diag.size();
  if (state.amplitudes.size() != static_cast<Eigen::Index>(dim))
    throw DataError("apply_hamiltonian: state dimension does not match landscape");
  const double a = schedule.a(s);
  const double b = schedule.b(s);
  QuantumState out;
  out.basis = state.basis;
  out.amplitudes.resize(state.amplitudes.size());
  for (std::uint64_t z = 0; z < dim; ++z) {
    Cplx acc = b * diag.energies[z] * state.amplitudes[z];
    for (int i = 0; i < diag.m; ++i)
      acc -= a * state.amplitudes[z ^ (std::uint64_t{1} << i)];
    out.amplitudes[z] = acc;
  }
  return out;
}

Trajectory evolve(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                  const std::vector<TargetSet>& targets, int grid_points,
                  double dt_override) {
  return run_evolution(diag, schedule, targets, grid_points, dt_override, true).traj;
}

QuantumState evolve_final_state(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                                int grid_points, double dt_override) {
  QuantumState st;
  st.basis = BasisKind::Full;
  st.amplitudes =
      run_evolution(diag, schedule, {}, grid_points, dt_override, false).final_amps;
  return st;
}

Eigen::MatrixXd dense_hamiltonian(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                                  double s) {
  const std::uint64_t dim = diag.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  const double a = schedule.a(s);
  const double b = schedule.b(s);
  for (std::uint64_t z = 0; z < dim; ++z) {
    H(z, z) = b * diag.energies[z];
    for (int i = 0; i < diag.m; ++i) H(z ^ (std::uint64_t{1} << i), z) = -a;
  }
  return H;
}

namespace {

// Lowest eigenvector of the dense symmetric H(s) with the deterministic
// degeneracy tie-break. `work` holds the column-major matrix fill.
struct GroundSolver {
  explicit GroundSolver(std::uint64_t dim) : dim_(dim), a_(dim * dim), w_(dim), z_(2 * dim) {}

  // Returns true if the ground space was degenerate at this s.
  bool solve(const DiagonalProblem& diag, double a_coef, double b_coef,
             std::vector<double>& ground) {
    const lapack_int n = static_cast<lapack_int>(dim_);
    std::fill(a_.begin(), a_.end(), 0.0);
    for (std::uint64_t z = 0; z < dim_; ++z) {
      a_[z * dim_ + z] = b_coef * diag.energies[z];
      for (int i = 0; i < diag.m; ++i) {
        const std::uint64_t r = z ^ (std::uint64_t{1} << i);
        if (r > z) a_[z * dim_ + r] = -a_coef;  // lower triangle, column z
      }
    }
    lapack_int found = 0;
    std::vector<lapack_int> isuppz(2 * 2);
    lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a_.data(), n, 0.0, 0.0, 1, 2,
                       0.0, &found, w_.data(), z_.data(), n, isuppz.data());
    if (info != 0 || found < 1)
      throw IntegrationError("adiabatic_trajectory: eigensolve failed (info=" +
                             std::to_string(info) + ")");
    const bool degenerate = found >= 2 && (w_[1] - w_[0]) <= kLevelTol;
    if (!degenerate) {
      ground.assign(z_.begin(), z_.begin() + dim_);
      fix_sign(ground);
      return false;
    }
    solve_degenerate(diag, a_coef, b_coef, ground);
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

  // Full solve; among eigenvectors within kLevelTol of the bottom pick the
  // one whose first nonzero component has the lowest basis index.
  void solve_degenerate(const DiagonalProblem& diag, double a_coef, double b_coef,
                        std::vector<double>& ground) {
    const lapack_int n = static_cast<lapack_int>(dim_);
    std::fill(a_.begin(), a_.end(), 0.0);
    for (std::uint64_t z = 0; z < dim_; ++z) {
      a_[z * dim_ + z] = b_coef * diag.energies[z];
      for (int i = 0; i < diag.m; ++i) {
        const std::uint64_t r = z ^ (std::uint64_t{1} << i);
        if (r > z) a_[z * dim_ + r] = -a_coef;
      }
    }
    std::vector<double> w(dim_), zfull(dim_ * dim_);
    std::vector<lapack_int> isuppz(2 * dim_);
    lapack_int found = 0;
    lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, a_.data(), n, 0.0, 0.0, 0, 0,
                       0.0, &found, w.data(), zfull.data(), n, isuppz.data());
    if (info != 0 || found < 1)
      throw IntegrationError("adiabatic_trajectory: degenerate eigensolve failed");
    std::size_t best_col = 0;
    std::uint64_t best_first = dim_;
    for (lapack_int col = 0; col < found && w[col] <= w[0] + kLevelTol; ++col) {
      std::uint64_t first = dim_;
      for (std::uint64_t r = 0; r < dim_; ++r)
        if (std::abs(zfull[col * dim_ + r]) > 1e-12) {
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

  std::uint64_t dim_;
  std::vector<double> a_, w_, z_;
};

}  // namespace

Trajectory adiabatic_trajectory(const DiagonalProblem& diag,
                                const std::vector<TargetSet>& targets, int grid_points,
                                int cap) {
  if (grid_points < 2) throw DataError("adiabatic_trajectory: need at least 2 grid points");
  if (diag.m > cap)
    throw SizeCapError("adiabatic_trajectory: 2^" + std::to_string(diag.m) +
                       " exceeds the dense eigensolve cap 2^" + std::to_string(cap));
  const std::uint64_t dim = diag.size();
  check_targets(targets, dim);

  Trajectory traj;
  traj.grid.resize(grid_points);
  traj.series.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    traj.series[i].label = targets[i].label;
    traj.series[i].values.resize(grid_points);
  }

  const AnnealSchedule unit{1.0};
  GroundSolver solver(dim);
  std::vector<double> ground;
  int degenerate_points = 0;
  double first_degenerate_s = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double s = static_cast<double>(k) / (grid_points - 1);
    if (solver.solve(diag, unit.a(s), unit.b(s), ground)) {
      if (degenerate_points == 0) first_degenerate_s = s;
      ++degenerate_points;
    }
    traj.grid[k] = s;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      double p = 0.0;
      for (auto z : targets[i].states) p += ground[z] * ground[z];
      traj.series[i].values[k] = p;
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

}  // namespace annealab
