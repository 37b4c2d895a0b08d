#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "cavbell/herald.hpp"

namespace cavbell {

/// Best local qubit rotation at node 2 for one herald event, with its Bloch
/// parameters: unitary = exp(-i angle/2 axis.sigma) up to global phase,
/// angle in [0, pi], azimuth = atan2(axis_y, axis_x).
struct CorrectionResult {
  double fidelity_corrected = 0.0;
  Eigen::Matrix2cd unitary = Eigen::Matrix2cd::Identity();
  double rotation_angle = 0.0;
  Eigen::Vector3d rotation_axis = Eigen::Vector3d::UnitZ();
  double azimuth = 0.0;
};

namespace detail {

/// M = |u><down| + sign |d><up| built from the node-2 components; the best
/// corrected fidelity is (sigma1+sigma2)^2 / (2 |state|^2), the nuclear norm
/// of M maximizing |Tr(V M)| over unitaries V.
inline Eigen::Matrix2cd correction_matrix(const ConditionalState& s, int bell_sign) {
  const Eigen::Vector2cd u(s.amps(0), s.amps(1));  // node 1 up
  const Eigen::Vector2cd d(s.amps(2), s.amps(3));  // node 1 down
  Eigen::Matrix2cd m;
  m.col(0) = static_cast<double>(bell_sign) * d;  // <up| column
  m.col(1) = u;                                   // <down| column
  return m;
}

/// Bloch decomposition of a 2x2 unitary with the global phase fixed so the
/// SU(2) representative has real non-negative trace.
inline void bloch_parameters(const Eigen::Matrix2cd& v, double& angle,
                             Eigen::Vector3d& axis, double& azimuth) {
  const complexd det = v.determinant();
  Eigen::Matrix2cd r = v / std::sqrt(det);
  if (r.trace().real() < 0.0) r = -r;
  const double c = std::clamp(0.5 * r.trace().real(), -1.0, 1.0);
  angle = 2.0 * std::acos(c);
  const double s = std::sin(0.5 * angle);
  if (s < 1e-12) {
    axis = Eigen::Vector3d::UnitZ();
    azimuth = 0.0;
    return;
  }
  axis(0) = -0.5 * (r(0, 1) + r(1, 0)).imag() / s;
  axis(1) = 0.5 * (r(1, 0) - r(0, 1)).real() / s;
  axis(2) = -0.5 * (r(0, 0) - r(1, 1)).imag() / s;
  const double n = axis.norm();
  if (n > 0.0) axis /= n;
  azimuth = std::atan2(axis(1), axis(0));
}

}  // namespace detail

/// Corrected fidelity alone, via (sigma1+sigma2)^2 = |M|_F^2 + 2 |det M|.
inline double corrected_fidelity(const ConditionalState& state, int bell_sign) {
  const double n2 = state.norm2();
  if (n2 <= 0.0) throw std::domain_error("corrected_fidelity: zero-norm herald event");
  const Eigen::Matrix2cd m = detail::correction_matrix(state, bell_sign);
  const double nuc2 = m.squaredNorm() + 2.0 * std::abs(m.determinant());
  return std::min(1.0, nuc2 / (2.0 * n2));
}

/// Closed-form optimal local correction at node 2.
inline CorrectionResult optimal_correction(const ConditionalState& state, int bell_sign) {
  const double n2 = state.norm2();
  if (n2 <= 0.0) throw std::domain_error("optimal_correction: zero-norm herald event");
  const Eigen::Matrix2cd m = detail::correction_matrix(state, bell_sign);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double nuc = svd.singularValues().sum();

  CorrectionResult res;
  res.fidelity_corrected = std::min(1.0, nuc * nuc / (2.0 * n2));
  res.unitary = svd.matrixV() * svd.matrixU().adjoint();
  detail::bloch_parameters(res.unitary, res.rotation_angle, res.rotation_axis,
                           res.azimuth);
  return res;
}

/// Applies a unitary to the node-2 half of the state.
inline ConditionalState apply_node2_unitary(const ConditionalState& s,
                                            const Eigen::Matrix2cd& v) {
  ConditionalState out = s;
  const Eigen::Vector2cd u(s.amps(0), s.amps(1));
  const Eigen::Vector2cd d(s.amps(2), s.amps(3));
  const Eigen::Vector2cd vu = v * u;
  const Eigen::Vector2cd vd = v * d;
  out.amps << vu(0), vu(1), vd(0), vd(1);
  return out;
}

/// Applies a unitary to the node-1 half of the state.
inline ConditionalState apply_node1_unitary(const ConditionalState& s,
                                            const Eigen::Matrix2cd& v) {
  ConditionalState out = s;
  const Eigen::Vector2cd h(s.amps(0), s.amps(2));
  const Eigen::Vector2cd g(s.amps(1), s.amps(3));
  const Eigen::Vector2cd vh = v * h;
  const Eigen::Vector2cd vg = v * g;
  out.amps << vh(0), vg(0), vh(1), vg(1);
  return out;
}

/// Diagnostic decomposition |state> = c1 |up>|b1> + c2 |down>|b2| with the
/// node-2 overlap p = |<b1|b2>|^2 extracted per event.
struct EventOverlapDiagnostic {
  double c1 = 0.0;
  double c2 = 0.0;
  double p = 0.0;
};

inline EventOverlapDiagnostic event_overlap_diagnostic(const ConditionalState& s) {
  const Eigen::Vector2cd u(s.amps(0), s.amps(1));
  const Eigen::Vector2cd d(s.amps(2), s.amps(3));
  const double n = std::sqrt(s.norm2());
  EventOverlapDiagnostic diag;
  if (n <= 0.0) return diag;
  diag.c1 = u.norm() / n;
  diag.c2 = d.norm() / n;
  if (u.norm() > 0.0 && d.norm() > 0.0) {
    const complexd ov = u.dot(d) / (u.norm() * d.norm());
    diag.p = std::norm(ov);
  }
  return diag;
}

}  // namespace cavbell
