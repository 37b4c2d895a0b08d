#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cavbell {

using complexd = std::complex<double>;

// All frequencies are in units of the cavity field decay rate kappa of the
// horizontal mode; times are in units of 1/kappa.

enum class EnvelopeShape { sin2, flattop };

/// Pump pulse envelope, normalized to peak 1 inside its support.
struct PulseEnvelope {
  EnvelopeShape shape = EnvelopeShape::sin2;
  double duration = 10.0;  // T
  double t_start = 0.0;
  double edge = 1.0;  // ramp length, flattop only

  double value(double t) const {
    const double u = t - t_start;
    if (u <= 0.0 || u >= duration) return 0.0;
    switch (shape) {
      case EnvelopeShape::sin2: {
        const double s = std::sin(M_PI * u / duration);
        return s * s;
      }
      case EnvelopeShape::flattop: {
        if (u < edge) {
          const double s = std::sin(0.5 * M_PI * u / edge);
          return s * s;
        }
        if (u > duration - edge) {
          const double s = std::sin(0.5 * M_PI * (duration - u) / edge);
          return s * s;
        }
        return 1.0;
      }
    }
    return 0.0;
  }

  double end() const { return t_start + duration; }
};

/// One tone of the bichromatic pump. `detuning` is the single-photon
/// detuning of the tone below the g<->e transition.
struct DriveTone {
  double rabi_peak = 0.0;
  double detuning = 0.0;
  PulseEnvelope envelope{};
};

/// Cavity polarization eigenmode structure: an undesired splitting omega_b
/// whose eigenbasis sits at angle theta_b from H/V, plus a deliberate
/// splitting delta_b aligned with H/V.
struct CavityBirefringence {
  double omega_b = 0.0;
  double delta_b = 0.0;
  double theta_b = 0.0;
};

/// Physical constants of one emitter-cavity node.
struct SystemParams {
  complexd g_up{1.0, 0.0};    // |e> <-> |up> coupling (emits sigma+)
  complexd g_down{1.0, 0.0};  // |e> <-> |down> coupling (emits sigma-)
  double kappa_h = 1.0;
  double kappa_v = 1.0;
  double gamma = 0.6;
  double delta_zeeman = 0.0;    // qubit splitting, |down> above |up>
  double cavity_detuning = 0.0; // cavity mean relative to the e<->up line
  CavityBirefringence birefringence{};
  std::array<DriveTone, 2> drive{};  // drive[0] targets |down>, drive[1] |up>
  Eigen::Matrix2cd emission_basis = Eigen::Matrix2cd::Identity();

  double drive_window_end() const {
    return std::max(drive[0].envelope.end(), drive[1].envelope.end());
  }

  /// Largest frequency scale present in the rotating-frame dynamics; used
  /// to size integration grids.
  double max_frequency_scale() const {
    double f = std::max({kappa_h, kappa_v, gamma, std::abs(delta_zeeman),
                         std::abs(cavity_detuning), std::abs(g_up),
                         std::abs(g_down), birefringence.omega_b,
                         birefringence.delta_b, 1.0});
    for (const auto& tone : drive) {
      f = std::max(f, std::abs(tone.detuning - cavity_detuning) + tone.rabi_peak);
    }
    return f;
  }
};

inline bool is_unitary(const Eigen::Matrix2cd& m, double tol = 1e-12) {
  return (m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Validates physical invariants. `strict` additionally requires positive
/// rates (loaders use strict; tests may build lossless params directly).
inline void validate(const SystemParams& p, bool strict = true) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  auto bad = [](double x) { return !std::isfinite(x); };
  if (bad(p.kappa_h) || p.kappa_h < 0.0) fail("kappa_h must be finite and >= 0");
  if (bad(p.kappa_v) || p.kappa_v < 0.0) fail("kappa_v must be finite and >= 0");
  if (bad(p.gamma) || p.gamma < 0.0) fail("gamma must be finite and >= 0");
  if (strict && p.kappa_h <= 0.0) fail("kappa_h must be > 0");
  if (strict && p.kappa_v <= 0.0) fail("kappa_v must be > 0");
  if (strict && p.gamma <= 0.0) fail("gamma must be > 0");
  if (bad(p.delta_zeeman)) fail("delta_zeeman must be finite");
  if (bad(p.cavity_detuning)) fail("cavity_detuning must be finite");
  if (p.birefringence.omega_b < 0.0) fail("birefringence.omega_b must be >= 0");
  if (p.birefringence.delta_b < 0.0) fail("birefringence.delta_b must be >= 0");
  if (bad(p.birefringence.theta_b)) fail("birefringence.theta_b must be finite");
  for (const auto& tone : p.drive) {
    if (bad(tone.rabi_peak) || tone.rabi_peak < 0.0) fail("drive.rabi_peak must be >= 0");
    if (bad(tone.detuning)) fail("drive.detuning must be finite");
    if (tone.envelope.duration <= 0.0) fail("drive.envelope.duration must be > 0");
    if (tone.envelope.shape == EnvelopeShape::flattop && tone.envelope.edge <= 0.0)
      fail("drive.envelope.edge must be > 0");
  }
  if (!is_unitary(p.emission_basis)) fail("emission_basis must be unitary to 1e-12");
}

/// Checks |g_up|^2/|g_down|^2 against a configured branching ratio.
inline void validate_branching(const SystemParams& p, double branching_ratio,
                               double rel_tol = 1e-9) {
  const double gd2 = std::norm(p.g_down);
  if (gd2 == 0.0) throw std::invalid_argument("branching ratio undefined: g_down = 0");
  const double r = std::norm(p.g_up) / gd2;
  if (std::abs(r - branching_ratio) > rel_tol * std::max(1.0, branching_ratio))
    throw std::invalid_argument("|g_up|^2/|g_down|^2 does not match branching_ratio");
}

}  // namespace cavbell
