#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "annealab/diagonal.hpp"
#include "annealab/spin.hpp"

namespace annealab {

inline constexpr double kLevelTol = 1e-9;  // absolute energy grouping tolerance

// Level and gap structure of one classical landscape. Optional fields are
// absent when the corresponding state class is empty.
struct SpectrumSummary {
  double e_gs = 0.0;                    // lowest energy
  double e_e1 = 0.0;                    // lowest energy above the ground level
  double delta_e_hc = 0.0;              // e_e1 - e_gs
  std::vector<std::uint64_t> gs_states; // states within kLevelTol of e_gs
  std::vector<std::uint64_t> e1_states; // states within kLevelTol of e_e1
  std::optional<double> e_feas_min;
  std::optional<double> e_infeas_min;
  std::optional<double> delta_e_f;      // e_infeas_min - e_feas_min

  std::string csv_row(const std::string& instance_id) const;
  static std::string csv_header();
};

SpectrumSummary summarize(const DiagonalProblem& diag);

// Smallest penalty weight that pushes every constraint-violating state
// strictly above the best feasible energy:
//   mu* = max(0, max over c(z)!=0 of 2*(E_feas_min - f(z) + lambda*c(z)) / c(z)^2).
// The mu/lambda baked into diag are ignored; only f and c enter.
double mu_star(const DiagonalProblem& diag, double lambda);
double mu_star(const GbpInstance& inst, double lambda);
double mu_star(const QkpInstance& inst, double lambda);

// All roots of mu*(lambda) = target inside [lo, hi], found by a 1e-3 grid
// scan refined by bisection to 1e-9. mu*(lambda) is convex piecewise linear,
// so the result is at most two isolated roots; a flat coincidence with the
// target is reported via its endpoints.
std::vector<double> calibrate_lambda(const DiagonalProblem& diag, double target_mu_star,
                                     double lo, double hi);

// Reassign energies to states: gs_state takes the lowest energy, e1_state the
// second lowest, and the remaining energies go to the remaining states in
// ascending basis-index order. Requires an Ising landscape (objective =
// energy) whose 2^m energies are pairwise distinct beyond kLevelTol.
DiagonalProblem permute_spectrum(const DiagonalProblem& diag, std::uint64_t gs_state,
                                 std::uint64_t e1_state);

}  // namespace annealab
