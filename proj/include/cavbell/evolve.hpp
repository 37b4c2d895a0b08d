#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cavbell/hamiltonian.hpp"
#include "cavbell/integrate.hpp"
#include "cavbell/params.hpp"
#include "cavbell/time_grid.hpp"

namespace cavbell {

/// Amplitudes over the six single-excitation basis states.
struct SingleExcitationState {
  Vector6cd amps = Vector6cd::Zero();

  static SingleExcitationState ground() {
    SingleExcitationState s;
    s.amps(kGround) = complexd(1.0, 0.0);
    return s;
  }

  double norm2() const { return amps.squaredNorm(); }
};

struct AmplitudeTrajectory {
  TimeGrid grid;
  std::vector<Vector6cd> states;

  double population(std::size_t sample, int basis_index) const {
    return std::norm(states[sample](basis_index));
  }
};

/// Largest admissible integration step for the given parameters.
inline double max_step(const SystemParams& p) {
  return 0.01 / p.max_frequency_scale();
}

/// Grid sized for `evolve`: covers [0, drive end + tail] at a step within
/// the admissible limit, with at least `min_samples` nodes.
inline TimeGrid default_grid(const SystemParams& p, double tail = 6.0,
                             std::size_t min_samples = 4096) {
  const double t_end = p.drive_window_end() + tail;
  const auto n = static_cast<std::size_t>(std::ceil(t_end / max_step(p))) + 1;
  return TimeGrid(0.0, t_end, std::max(n, min_samples));
}

/// Integrates i d|psi>/dt = H_eff(t) |psi> with fixed-step RK4 on `grid`.
inline AmplitudeTrajectory evolve(const SystemParams& p, const TimeGrid& grid,
                                  const SingleExcitationState& initial) {
  if (std::abs(initial.norm2() - 1.0) > 1e-9)
    throw std::invalid_argument("evolve: initial state must be normalized");
  if (grid.t0 != 0.0)
    throw std::invalid_argument("evolve: grid must start at t = 0");
  if (grid.t1 < p.drive_window_end() + 4.0)
    throw std::invalid_argument("evolve: grid must cover the drive window plus a >= 4/kappa tail");
  if (grid.dt() > max_step(p))
    throw std::invalid_argument("evolve: grid step too coarse for the fastest frequency scale");
  if (!is_unitary(p.emission_basis))
    throw std::invalid_argument("evolve: emission_basis not unitary");

  const Matrix6cd h0 = static_hamiltonian(p);
  const complexd minus_i(0.0, -1.0);
  auto deriv = [&](double t, const Vector6cd& y) -> Vector6cd {
    Vector6cd dy = minus_i * (h0 * y);
    const complexd d = drive_coupling(p, t);
    dy(kExcited) += minus_i * d * y(kGround);
    dy(kGround) += minus_i * std::conj(d) * y(kExcited);
    return dy;
  };

  AmplitudeTrajectory traj;
  traj.grid = grid;
  traj.states = rk4_integrate(deriv, initial.amps, grid);
  return traj;
}

/// Step-halving self check: largest amplitude change between the trajectory
/// on `grid` and on the refined grid, compared at shared nodes.
inline double halving_error(const SystemParams& p, const TimeGrid& grid,
                            const SingleExcitationState& initial) {
  const AmplitudeTrajectory coarse = evolve(p, grid, initial);
  const AmplitudeTrajectory fine = evolve(p, grid.refined(), initial);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i)
    err = std::max(err, (coarse.states[i] - fine.states[2 * i]).cwiseAbs().maxCoeff());
  return err;
}

/// As `evolve`, but fails loudly when the step-halving check exceeds 1e-6.
inline AmplitudeTrajectory evolve_checked(const SystemParams& p, const TimeGrid& grid,
                                          const SingleExcitationState& initial) {
  const double err = halving_error(p, grid, initial);
  if (!(err < 1e-6))
    throw std::runtime_error("evolve: step-halving check failed (non-convergent grid)");
  return evolve(p, grid, initial);
}

}  // namespace cavbell
