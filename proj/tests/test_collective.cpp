#include <doctest.h>

#include <cmath>
#include <complex>

#include "annealab/collective.hpp"
#include "annealab/dynamics.hpp"
#include "annealab/errors.hpp"
#include "annealab/instance.hpp"

using namespace annealab;

namespace {

// Uniform fully connected instance expressed in the full 2^n basis.
IsingInstance uniform_full(int n, double j, double h) {
  IsingInstance inst;
  inst.n = n;
  inst.kind = j >= 0 ? IsingKind::FM : IsingKind::AF;
  inst.scale_by_n = true;
  inst.couplings.assign(static_cast<std::size_t>(n) * (n - 1) / 2, j);
  inst.fields.assign(n, h);
  return inst;
}

std::vector<TargetSet> level_targets_full(int n) {
  std::vector<TargetSet> t;
  for (int k = 0; k <= n; ++k) t.push_back({"k" + std::to_string(k), level_states(n, k)});
  return t;
}

std::vector<TargetSet> level_targets_collective(int n) {
  std::vector<TargetSet> t;
  for (int k = 0; k <= n; ++k)
    t.push_back({"k" + std::to_string(k), {static_cast<std::uint64_t>(k)}});
  return t;
}

}  // namespace

TEST_CASE("collective energies and driver for two spins") {
  const auto m = build_collective(2, 1.0, 0.0);
  REQUIRE(m.dim() == 3);
  CHECK(m.energies[0] == doctest::Approx(-0.5));  // q = -2
  CHECK(m.energies[1] == doctest::Approx(0.5));   // q = 0
  CHECK(m.energies[2] == doctest::Approx(-0.5));  // q = +2
  CHECK(m.offdiag[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(m.offdiag[1] == doctest::Approx(-std::sqrt(2.0)));
  CHECK_THROWS_AS(build_collective(1, 1.0, 0.0), InfeasibleConfigError);
}

TEST_CASE("collective energies equal the full-space landscape on every level") {
  for (double j : {1.0, -1.0}) {
    const auto model = build_collective(5, j, 2.5);
    const auto inst = uniform_full(5, j, 2.5);
    for (int k = 0; k <= 5; ++k)
      for (auto z : level_states(5, k))
        CHECK(evaluate_energy(inst, z).energy == doctest::Approx(model.energies[k]).epsilon(1e-12));
  }
}

TEST_CASE("strong field puts the lowest two levels on adjacent q values") {
  for (double j : {1.0, -1.0}) {
    const auto levels = lowest_levels(build_collective(4, j, 2.5));
    CHECK(levels.k_gs == 4);  // q = +4, all spins up
    CHECK(levels.k_e1 == 3);  // q = +2
    CHECK(levels.k_gs - levels.k_e1 == 1);
  }
  // h = 0 leaves q and -q degenerate
  CHECK_THROWS_AS(lowest_levels(build_collective(2, 1.0, 0.0)), DataError);
}

TEST_CASE("collective initial state carries binomial weights") {
  const auto s2 = collective_initial_state(2);
  CHECK(std::abs(s2.amplitudes[0] - 0.5) < 1e-15);
  CHECK(std::abs(s2.amplitudes[1] - std::sqrt(2.0) / 2.0) < 1e-15);
  CHECK(std::abs(s2.amplitudes[2] - 0.5) < 1e-15);
  for (int n : {4, 20, 55, 200, 1024}) {
    CHECK(std::abs(collective_initial_state(n).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("binomial coefficients are exact") {
  CHECK(binomial(4, 2) == 6.0);
  CHECK(binomial(10, 0) == 1.0);
  CHECK(binomial(10, 10) == 1.0);
  CHECK(binomial(55, 27) == 3824345300380220.0);
}

TEST_CASE("level expansion spreads amplitudes over matching bitstrings") {
  QuantumState dicke{Eigen::VectorXcd::Zero(3), BasisKind::Collective};
  dicke.amplitudes[1] = 1.0;  // one up spin
  const auto full = expand_to_full(dicke);
  REQUIRE(full.amplitudes.size() == 4);
  CHECK(std::abs(full.amplitudes[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(full.amplitudes[2] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(full.amplitudes[0]) == 0.0);
  CHECK(std::abs(full.amplitudes[3]) == 0.0);

  QuantumState bottom{Eigen::VectorXcd::Zero(3), BasisKind::Collective};
  bottom.amplitudes[0] = 1.0;  // q = -2, both spins down: both bits set
  const auto fb = expand_to_full(bottom);
  CHECK(std::abs(fb.amplitudes[3] - 1.0) < 1e-15);
  CHECK(std::abs(fb.norm() - 1.0) < 1e-15);
}

TEST_CASE("expanding the collective start reproduces the uniform superposition") {
  const auto full = expand_to_full(collective_initial_state(4));
  const auto want = initial_state(4);
  CHECK((full.amplitudes - want.amplitudes).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("static collective trajectory starts on symmetric-sector weights") {
  const int n = 6;
  const auto model = build_collective(n, 1.0, 2.5);
  const auto traj = collective_static_trajectory(model, level_targets_collective(n), 51);
  for (int k = 0; k <= n; ++k) {
    const double want = binomial(n, k) / std::pow(2.0, n);
    CHECK(std::abs(traj.find("k" + std::to_string(k)).values.front() - want) < 1e-9);
  }
  CHECK(traj.meta.tau_mode == "static");
}

TEST_CASE("full and collective static trajectories agree") {
  for (double j : {1.0, -1.0}) {
    const int n = 4;
    const auto diag = build_diagonal(uniform_full(n, j, 2.5));
    const auto full = adiabatic_trajectory(diag, level_targets_full(n), 101);
    const auto model = build_collective(n, j, 2.5);
    const auto coll = collective_static_trajectory(model, level_targets_collective(n), 101);
    for (int k = 0; k <= n; ++k) {
      const auto& a = full.find("k" + std::to_string(k)).values;
      const auto& b = coll.find("k" + std::to_string(k)).values;
      double worst = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("full and collective finite-time trajectories agree") {
  for (double j : {1.0, -1.0}) {
    const int n = 4;
    const AnnealSchedule sch{100.0};
    const auto diag = build_diagonal(uniform_full(n, j, 2.5));
    const auto full = evolve(diag, sch, level_targets_full(n), 51);
    const auto model = build_collective(n, j, 2.5);
    const auto coll = collective_evolve(model, sch, level_targets_collective(n), 51);
    for (int k = 0; k <= n; ++k) {
      const auto& a = full.find("k" + std::to_string(k)).values;
      const auto& b = coll.find("k" + std::to_string(k)).values;
      double worst = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("evolution never leaks out of the symmetric sector") {
  const int n = 4;
  const auto diag = build_diagonal(uniform_full(n, 1.0, 2.5));
  const auto psi = evolve_final_state(diag, AnnealSchedule{30.0}, 2);
  double in_sector = 0.0;
  for (int k = 0; k <= n; ++k) {
    std::complex<double> overlap = 0.0;
    const auto zs = level_states(n, k);
    const double norm = 1.0 / std::sqrt(binomial(n, k));
    for (auto z : zs) overlap += norm * psi.amplitudes[static_cast<int>(z)];
    in_sector += std::norm(overlap);
  }
  CHECK(1.0 - in_sector < 1e-10);
}

TEST_CASE("level states partition the basis") {
  const int n = 5;
  std::size_t total = 0;
  for (int k = 0; k <= n; ++k) {
    const auto zs = level_states(n, k);
    CHECK(zs.size() == static_cast<std::size_t>(binomial(n, k)));
    for (auto z : zs) CHECK(n - std::popcount(z) == k);
    total += zs.size();
  }
  CHECK(total == 32);
  CHECK_THROWS_AS(expand_to_full(collective_initial_state(13)), SizeCapError);
}
