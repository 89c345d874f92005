#pragma once

#include <vector>

#include "annealab/dynamics.hpp"

namespace annealab {

// Uniform fully connected transverse-field Ising model restricted to the
// maximal-total-spin sector. Level k holds the Dicke state with k up spins
// (q = 2k - n); in the full 2^n basis that is the symmetric superposition of
// all bitstrings with n-k bits set, since bit 0 encodes spin up.
struct CollectiveModel {
  int n = 0;
  double j = 0.0;
  double h = 0.0;
  std::vector<double> energies;  // E(k) = -(j/(2n))(q^2 - n) - h q, q = 2k - n
  std::vector<double> offdiag;   // driver element between k and k+1: -sqrt((k+1)(n-k))

  int dim() const { return n + 1; }
};

CollectiveModel build_collective(int n, double j, double h);

// Classical ground and first-excited levels of E(k); throws if either level
// is degenerate beyond kLevelTol.
struct CollectiveLevels {
  int k_gs = 0;
  int k_e1 = 0;
};
CollectiveLevels lowest_levels(const CollectiveModel& model);

// Uniform full-space superposition expressed in the Dicke basis:
// amplitude at level k is sqrt(binomial(n,k)) / 2^{n/2}.
QuantumState collective_initial_state(int n);

// Level sets are lists of k indices. Static variant: instantaneous ground
// state of the (n+1)-dimensional tridiagonal H(s) per grid point.
Trajectory collective_static_trajectory(const CollectiveModel& model,
                                        const std::vector<TargetSet>& targets,
                                        int grid_points);
Trajectory collective_evolve(const CollectiveModel& model, const AnnealSchedule& schedule,
                             const std::vector<TargetSet>& targets, int grid_points,
                             double dt_override = 0.0);

// Spread level amplitudes uniformly over each level's bitstrings (n <= 12).
QuantumState expand_to_full(const QuantumState& state);

// Exact binomial coefficients via Pascal recurrence (n <= 55 stays integral
// in double precision).
double binomial(int n, int k);

// Basis indices of Dicke level k in the full space: popcount(z) == n - k.
std::vector<std::uint64_t> level_states(int n, int k);

}  // namespace annealab
