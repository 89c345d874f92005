#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "annealab/diagonal.hpp"
#include "annealab/trajectory.hpp"

namespace annealab {

// Linear interpolation H(s) = A(s) H_q + B(s) H_c with A(s) = 1-s, B(s) = s,
// s = t/tau, and H_q = -sum_i sigma^x_i.
struct AnnealSchedule {
  double tau = 1.0;

  double a(double s) const { return 1.0 - s; }
  double b(double s) const { return s; }

  // Exact integrals of A and B over a time window [t0, t1] (both linear in t).
  double a_integral(double t0, double t1) const {
    return (t1 - t0) - (t1 * t1 - t0 * t0) / (2.0 * tau);
  }
  double b_integral(double t0, double t1) const {
    return (t1 * t1 - t0 * t0) / (2.0 * tau);
  }
};

enum class BasisKind { Full, Collective };

struct QuantumState {
  Eigen::VectorXcd amplitudes;
  BasisKind basis = BasisKind::Full;

  double norm() const { return amplitudes.norm(); }
  // Hard contract: states are normalized to 1e-6.
  void check_norm() const;
};

struct TargetSet {
  std::string label;
  std::vector<std::uint64_t> states;
};

inline constexpr int kEigensolveCap = 14;  // dense 2^m eigensolves refuse beyond this

QuantumState initial_state(int m, int cap = kDenseCap);

// Matrix-free image H(s)|psi>: result[z] = B(s) E(z) psi[z] - A(s) sum_i psi[z ^ 2^i].
QuantumState apply_hamiltonian(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                               double s, const QuantumState& state);

// Integrates i d/dt psi = H(t) psi from the uniform state over t in [0, tau]
// with an exactly unitary fourth-order split-step scheme (driver and problem
// parts are each diagonalizable in closed form; their flows compose via a
// triple-jump of midpoint-split substeps). Records target probabilities at
// gridPoints uniform s values. dt_override = 0 selects the default step
// min(0.01, tau/1e4); each inter-record interval is divided evenly into
// steps no longer than that.
Trajectory evolve(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                  const std::vector<TargetSet>& targets, int grid_points,
                  double dt_override = 0.0);

// Same integration, returning the final amplitudes instead of a trajectory.
QuantumState evolve_final_state(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                                int grid_points = 1001, double dt_override = 0.0);

// Adiabatic limit: at each grid s the minimum-eigenvalue eigenvector of the
// densely assembled H(s). Degenerate ground spaces resolve to the candidate
// whose first nonzero component has the lowest basis index (sign fixed by
// making the largest-magnitude component positive) and add a warning.
Trajectory adiabatic_trajectory(const DiagonalProblem& diag,
                                const std::vector<TargetSet>& targets, int grid_points,
                                int cap = kEigensolveCap);

// Dense assembly of H(s) used by the adiabatic path; exposed for tests.
Eigen::MatrixXd dense_hamiltonian(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                                  double s);

}  // namespace annealab
