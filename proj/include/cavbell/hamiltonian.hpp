#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "cavbell/params.hpp"

namespace cavbell {

using Matrix6cd = Eigen::Matrix<complexd, 6, 6>;
using Vector6cd = Eigen::Matrix<complexd, 6, 1>;

/// Single-excitation basis indices.
enum BasisIndex : int {
  kGround = 0,   // |g, 0>
  kExcited = 1,  // |e, 0>
  kUpH = 2,      // |up, 1_H>
  kUpV = 3,      // |up, 1_V>
  kDownH = 4,    // |down, 1_H>
  kDownV = 5,    // |down, 1_V>
};

/// 2x2 Hermitian polarization block in the H/V basis, relative to the cavity
/// mean frequency: deliberate splitting delta_b on the diagonal plus the
/// undesired splitting omega_b rotated to angle theta_b.
inline Eigen::Matrix2cd polarization_block(const CavityBirefringence& b) {
  const double c = std::cos(2.0 * b.theta_b);
  const double s = std::sin(2.0 * b.theta_b);
  Eigen::Matrix2cd m;
  m(0, 0) = complexd(0.5 * b.delta_b + 0.5 * b.omega_b * c, 0.0);
  m(1, 1) = complexd(-0.5 * b.delta_b - 0.5 * b.omega_b * c, 0.0);
  m(0, 1) = complexd(0.5 * b.omega_b * s, 0.0);
  m(1, 0) = complexd(0.5 * b.omega_b * s, 0.0);
  return m;
}

/// Time-independent part of H_eff: everything except the pump coupling.
/// The frame rotates photon states at the cavity mean frequency and the
/// atomic states such that the qubit blocks sit at 0 (up) and delta_zeeman
/// (down); losses enter as -i*kappa on photon states and -i*gamma/2 on |e>.
inline Matrix6cd static_hamiltonian(const SystemParams& p) {
  Matrix6cd h = Matrix6cd::Zero();

  h(kExcited, kExcited) = complexd(p.cavity_detuning, -0.5 * p.gamma);

  const Eigen::Matrix2cd pol = polarization_block(p.birefringence);
  const Eigen::Vector2cd loss(complexd(0.0, -p.kappa_h), complexd(0.0, -p.kappa_v));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      h(kUpH + a, kUpH + b) = pol(a, b);
      h(kDownH + a, kDownH + b) = pol(a, b);
    }
    h(kUpH + a, kUpH + a) += loss(a);
    h(kDownH + a, kDownH + a) += loss(a) + complexd(p.delta_zeeman, 0.0);
  }

  // e <-> (qubit, photon) couplings routed through the emission basis:
  // column 0 of emission_basis gives the H/V components of the sigma+ mode.
  const Eigen::Matrix2cd& u = p.emission_basis;
  for (int a = 0; a < 2; ++a) {
    h(kUpH + a, kExcited) = p.g_up * u(a, 0);
    h(kExcited, kUpH + a) = std::conj(p.g_up * u(a, 0));
    h(kDownH + a, kExcited) = p.g_down * u(a, 1);
    h(kExcited, kDownH + a) = std::conj(p.g_down * u(a, 1));
  }
  return h;
}

/// Complex pump coupling <e|H|g> at time t. Tone j is kept at its physical
/// frequency: in this frame it carries the residual phase
/// exp(i (detuning_j - cavity_detuning) t), so zero residual frequency means
/// Raman resonance with the mean cavity mode.
inline complexd drive_coupling(const SystemParams& p, double t) {
  complexd sum(0.0, 0.0);
  for (const auto& tone : p.drive) {
    const double env = tone.envelope.value(t);
    if (env == 0.0) continue;
    const double nu = tone.detuning - p.cavity_detuning;
    sum += 0.5 * tone.rabi_peak * env * std::polar(1.0, nu * t);
  }
  return sum;
}

inline void add_drive(Matrix6cd& h, const SystemParams& p, double t) {
  const complexd d = drive_coupling(p, t);
  h(kExcited, kGround) = d;
  h(kGround, kExcited) = std::conj(d);
}

/// Effective non-Hermitian Hamiltonian of one node at time t.
inline Matrix6cd effective_hamiltonian(const SystemParams& p, double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw std::domain_error("effective_hamiltonian: t outside drive window");
  if (!is_unitary(p.emission_basis))
    throw std::invalid_argument("effective_hamiltonian: emission_basis not unitary");
  Matrix6cd h = static_hamiltonian(p);
  add_drive(h, p, t);
  return h;
}

inline Matrix6cd hermitian_part(const Matrix6cd& h) {
  return 0.5 * (h + h.adjoint());
}

}  // namespace cavbell
