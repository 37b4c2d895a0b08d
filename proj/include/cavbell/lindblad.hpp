#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cavbell/hamiltonian.hpp"
#include "cavbell/integrate.hpp"
#include "cavbell/params.hpp"
#include "cavbell/time_grid.hpp"

namespace cavbell {

using Matrix7cd = Eigen::Matrix<complexd, 7, 7>;

constexpr int kLost = 6;  // absorbing label for all decayed population

/// Density matrix over the six coherent states plus the absorbing label.
struct DensityState {
  Matrix7cd rho = Matrix7cd::Zero();

  static DensityState pure_ground() {
    DensityState s;
    s.rho(kGround, kGround) = complexd(1.0, 0.0);
    return s;
  }

  double trace_real() const { return rho.trace().real(); }

  double hermiticity_defect() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix7cd> es(0.5 * (rho + rho.adjoint()),
                                                Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
};

inline void validate(const DensityState& s) {
  if (std::abs(s.trace_real() - 1.0) > 1e-9)
    throw std::invalid_argument("DensityState: trace must be 1 to 1e-9");
  if (s.hermiticity_defect() > 1e-12)
    throw std::invalid_argument("DensityState: not Hermitian to 1e-12");
  if (s.min_eigenvalue() < -1e-9)
    throw std::invalid_argument("DensityState: not positive semidefinite");
}

/// Full master-equation evolution used as a brute-force oracle for the
/// amplitude method. The Hamiltonian is the Hermitian part of H_eff; decay
/// is carried by one collapse operator per source state, all emptying into
/// the absorbing label so nothing re-feeds the coherent subspace.
inline std::vector<DensityState> evolve_lindblad(const SystemParams& p,
                                                 const TimeGrid& grid,
                                                 const DensityState& initial) {
  validate(initial);
  if (grid.dt() > 0.01 / p.max_frequency_scale())
    throw std::invalid_argument("evolve_lindblad: grid step too coarse");

  struct Collapse {
    int from;
    double rate;  // L = sqrt(rate) |lost><from|
  };
  const std::array<Collapse, 5> collapses{{{kExcited, p.gamma},
                                           {kUpH, 2.0 * p.kappa_h},
                                           {kUpV, 2.0 * p.kappa_v},
                                           {kDownH, 2.0 * p.kappa_h},
                                           {kDownV, 2.0 * p.kappa_v}}};

  const Matrix6cd h0 = static_hamiltonian(p);
  auto deriv = [&](double t, const Matrix7cd& rho) -> Matrix7cd {
    Matrix6cd h6 = h0;
    add_drive(h6, p, t);
    h6 = hermitian_part(h6);
    Matrix7cd h = Matrix7cd::Zero();
    h.topLeftCorner<6, 6>() = h6;

    const complexd minus_i(0.0, -1.0);
    Matrix7cd drho = minus_i * (h * rho - rho * h);
    for (const auto& c : collapses) {
      // L rho L^dag = rate * rho(from,from) |lost><lost|
      drho(kLost, kLost) += c.rate * rho(c.from, c.from);
      // -1/2 {L^dag L, rho} with L^dag L = rate |from><from|
      for (int j = 0; j < 7; ++j) {
        drho(c.from, j) -= 0.5 * c.rate * rho(c.from, j);
        drho(j, c.from) -= 0.5 * c.rate * rho(j, c.from);
      }
    }
    return drho;
  };

  const std::vector<Matrix7cd> rhos = rk4_integrate(deriv, initial.rho, grid);
  std::vector<DensityState> out(rhos.size());
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    out[i].rho = rhos[i];
    if (out[i].min_eigenvalue() < -1e-9)
      throw std::runtime_error("evolve_lindblad: positivity violated beyond tolerance");
  }
  return out;
}

}  // namespace cavbell
