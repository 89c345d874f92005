#include "annealab/diagonal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "annealab/errors.hpp"

namespace annealab {

namespace {

void check_cap(int m, int cap) {
  if (m < 1) throw SizeCapError("build_diagonal: spin count must be positive");
  if (m > cap)
    throw SizeCapError("build_diagonal: 2^" + std::to_string(m) +
                       " states exceed the dense cap of 2^" + std::to_string(cap));
}

// Optimal = feasible and within 1e-9 of the best feasible objective
// (relative for large objectives, absolute near zero).
void mark_optimal(DiagonalProblem& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < d.size(); ++z)
    if (d.feasible[z] && d.objectives[z] < best) best = d.objectives[z];
  d.optimal.assign(d.size(), 0);
  if (!std::isfinite(best)) return;  // no feasible states
  const double tol = 1e-9 * std::max(1.0, std::abs(best));
  for (std::size_t z = 0; z < d.size(); ++z)
    if (d.feasible[z] && d.objectives[z] <= best + tol) d.optimal[z] = 1;
}

template <class Inst>
DiagonalProblem build_impl(const Inst& inst, ProblemKind kind, double mu, double lambda,
                           int cap) {
  inst.validate();
  const int m = inst.spin_count();
  check_cap(m, cap);
  DiagonalProblem d;
  d.m = m;
  d.kind = kind;
  d.mu = mu;
  d.lambda = lambda;
  const std::size_t dim = std::size_t{1} << m;
  d.energies.resize(dim);
  d.objectives.resize(dim);
  d.constraints.resize(dim);
  d.feasible.resize(dim);
  for (std::size_t z = 0; z < dim; ++z) {
    const EnergyTerms t = evaluate_energy(inst, z);
    d.energies[z] = t.energy;
    d.objectives[z] = t.objective;
    d.constraints[z] = t.constraint;
    d.feasible[z] = (t.constraint == 0.0);
  }
  mark_optimal(d);
  return d;
}

}  // namespace

DiagonalProblem DiagonalProblem::with_coefficients(double new_mu, double new_lambda) const {
  if (kind == ProblemKind::Ising)
    throw InfeasibleConfigError("with_coefficients: Ising landscapes carry no penalty terms");
  DiagonalProblem d = *this;
  d.mu = new_mu;
  d.lambda = new_lambda;
  for (std::size_t z = 0; z < d.size(); ++z) {
    const double c = d.constraints[z];
    d.energies[z] = d.objectives[z] + 0.5 * new_mu * c * c - new_lambda * c;
  }
  return d;
}

DiagonalProblem build_diagonal(const GbpInstance& inst, int cap) {
  return build_impl(inst, ProblemKind::Gbp, inst.mu, inst.lambda, cap);
}

DiagonalProblem build_diagonal(const QkpInstance& inst, int cap) {
  return build_impl(inst, ProblemKind::Qkp, inst.mu, inst.lambda, cap);
}

DiagonalProblem build_diagonal(const IsingInstance& inst, int cap) {
  return build_impl(inst, ProblemKind::Ising, 0.0, 0.0, cap);
}

}  // namespace annealab
