#pragma once

#include <cmath>
#include <cstddef>

#include "annealab/dynamics.hpp"

namespace annealab::detail {

// Shared stepping core for the full-space and collective integrators.
//
// One step over [t, t+h] is a triple-jump (Yoshida) composition of
// midpoint-split substeps. Each substep [a, b] applies
//   driver(int_a^mid A dt) ; phase(int_a^b B dt) ; driver(int_mid^b A dt)
// where both sub-flows are exact exponentials of their (self-commuting)
// Hamiltonian parts, so every step is unitary by construction and the
// composition is globally fourth-order accurate.
//
// record(k, s_k, h) fires at every grid point, including s=0 before any
// stepping; h is the actual step length in use.
template <class DriverFlow, class PhaseFlow, class Recorder>
void run_split_evolution(const AnnealSchedule& sch, double dt_target, int grid_points,
                         DriverFlow&& driver, PhaseFlow&& phase, Recorder&& record) {
  const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double w0 = 1.0 - 2.0 * w1;

  const auto substep = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    driver(sch.a_integral(a, mid));
    phase(sch.b_integral(a, b));
    driver(sch.a_integral(mid, b));
  };

  const double interval = sch.tau / (grid_points - 1);
  const std::size_t n_sub =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(interval / dt_target - 1e-12)));
  const double h = interval / static_cast<double>(n_sub);

  record(0, 0.0, h);
  for (int k = 0; k + 1 < grid_points; ++k) {
    const double t_lo = k * interval;
    for (std::size_t j = 0; j < n_sub; ++j) {
      const double t = t_lo + j * h;
      const double c1 = t + w1 * h;
      const double c2 = c1 + w0 * h;
      substep(t, c1);
      substep(c1, c2);
      substep(c2, t + h);
    }
    record(k + 1, static_cast<double>(k + 1) / (grid_points - 1), h);
  }
}

}  // namespace annealab::detail
