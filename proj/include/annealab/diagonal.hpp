#pragma once

#include <cstdint>
#include <vector>

#include "annealab/instance.hpp"

namespace annealab {

enum class ProblemKind { Gbp, Qkp, Ising };

// Full enumeration of the classical energy landscape over all 2^m basis
// states. Objectives and constraint residuals do not depend on (mu, lambda),
// so a build can be re-priced cheaply via with_coefficients.
struct DiagonalProblem {
  int m = 0;  // total spin count
  ProblemKind kind = ProblemKind::Ising;
  double mu = 0.0;
  double lambda = 0.0;
  std::vector<double> energies;      // E(z)
  std::vector<double> objectives;    // f(z)
  std::vector<double> constraints;   // c(z), exactly 0 for feasible states
  std::vector<std::uint8_t> feasible;
  std::vector<std::uint8_t> optimal;

  std::size_t size() const { return energies.size(); }

  // Same landscape under new penalty coefficients. Feasibility and
  // optimality are invariant; only energies change. Ising kinds reject.
  DiagonalProblem with_coefficients(double new_mu, double new_lambda) const;
};

inline constexpr int kDenseCap = 24;  // hard cap on m for 2^m enumeration

DiagonalProblem build_diagonal(const GbpInstance& inst, int cap = kDenseCap);
DiagonalProblem build_diagonal(const QkpInstance& inst, int cap = kDenseCap);
DiagonalProblem build_diagonal(const IsingInstance& inst, int cap = kDenseCap);

}  // namespace annealab
