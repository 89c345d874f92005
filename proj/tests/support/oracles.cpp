#include "oracles.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "annealab/errors.hpp"

namespace annealab::oracles {

Eigen::MatrixXd sigma_x_matrix(int m, int i) {
  Eigen::MatrixXd sx(2, 2), id(2, 2);
  sx << 0, 1, 1, 0;
  id.setIdentity();
  Eigen::MatrixXd op(1, 1);
  op << 1;
  // Factor j ends up on bit j when each new factor is kron'ed on the left.
  for (int j = 0; j < m; ++j)
    op = Eigen::kroneckerProduct(j == i ? sx : id, op).eval();
  return op;
}

Eigen::MatrixXd dense_hamiltonian_kron(const DiagonalProblem& diag,
                                       const AnnealSchedule& schedule, double s) {
  const auto dim = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index z = 0; z < dim; ++z) H(z, z) = schedule.b(s) * diag.energies[z];
  for (int i = 0; i < diag.m; ++i) H -= schedule.a(s) * sigma_x_matrix(diag.m, i);
  return H;
}

Eigen::VectorXcd matexp_propagate(const DiagonalProblem& diag, const AnnealSchedule& schedule,
                                  int slices) {
  const auto dim = static_cast<Eigen::Index>(diag.size());
  Eigen::VectorXcd psi =
      Eigen::VectorXcd::Constant(dim, std::complex<double>(std::pow(2.0, -0.5 * diag.m), 0));
  const double dt = schedule.tau / slices;
  for (int k = 0; k < slices; ++k) {
    const double t_mid = (k + 0.5) * dt;
    const Eigen::MatrixXd H = dense_hamiltonian_kron(diag, schedule, t_mid / schedule.tau);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw IntegrationError("matexp oracle: eigensolve failed");
    const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd y = V.adjoint() * psi;
    for (Eigen::Index k = 0; k < dim; ++k)
      y[k] *= std::exp(std::complex<double>(0, -dt * es.eigenvalues()[k]));
    psi = V * y;
  }
  return psi;
}

namespace {

// True iff every minimum-energy state of the landscape re-priced at (mu,
// lambda) carries the optimal flag.
bool ground_states_all_optimal(const DiagonalProblem& diag, double mu, double lambda) {
  double min_e = std::numeric_limits<double>::infinity();
  const std::size_t dim = diag.size();
  std::vector<double> e(dim);
  for (std::size_t z = 0; z < dim; ++z) {
    const double c = diag.constraints[z];
    e[z] = diag.objectives[z] + 0.5 * mu * c * c - lambda * c;
    min_e = std::min(min_e, e[z]);
  }
  for (std::size_t z = 0; z < dim; ++z)
    if (e[z] <= min_e && !diag.optimal[z]) return false;
  return true;
}

}  // namespace

double mu_star_bisection(const DiagonalProblem& diag, double lambda, double hi, double tol) {
  if (!ground_states_all_optimal(diag, hi, lambda))
    throw CalibrationError("mu_star_bisection: predicate still false at the upper bound");
  if (ground_states_all_optimal(diag, 0.0, lambda)) return 0.0;
  double lo = 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (ground_states_all_optimal(diag, mid, lambda))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double delta_ef_scan(const DiagonalProblem& diag) {
  double feas = std::numeric_limits<double>::infinity();
  double infeas = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < diag.size(); ++z) {
    if (diag.feasible[z]) {
      if (diag.energies[z] < feas) feas = diag.energies[z];
    } else {
      if (diag.energies[z] < infeas) infeas = diag.energies[z];
    }
  }
  if (!std::isfinite(feas) || !std::isfinite(infeas))
    return std::numeric_limits<double>::quiet_NaN();
  return infeas - feas;
}

}  // namespace annealab::oracles
