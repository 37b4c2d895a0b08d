#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "cavbell/emission.hpp"
#include "cavbell/params.hpp"

namespace cavbell {

using Vector4cd = Eigen::Matrix<complexd, 4, 1>;

enum class Port { c, d };

/// Which beam-splitter output ports registered the H and the V click.
struct HeraldPattern {
  Port port_h = Port::c;
  Port port_v = Port::c;
};

/// Same-port patterns herald |up,down> + |down,up>; mixed-port patterns the
/// minus superposition.
inline int bell_sign_for(const HeraldPattern& pat) {
  return pat.port_h == pat.port_v ? +1 : -1;
}

/// Polarization unitary applied to a node's output before detection.
struct JonesElement {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();

  static JonesElement identity() { return JonesElement{}; }
};

inline void validate(const JonesElement& j) {
  if (!is_unitary(j.m)) throw std::invalid_argument("JonesElement must be unitary to 1e-12");
}

/// Unnormalized two-qubit amplitudes over (|uu>, |ud>, |du>, |dd>) for one
/// herald event, in the paper's conjugated wavepacket convention.
struct ConditionalState {
  double t_h = 0.0;
  double t_v = 0.0;
  Vector4cd amps = Vector4cd::Zero();

  double norm2() const { return amps.squaredNorm(); }
};

namespace detail {
// Node-1 photons reach port c with +1/sqrt(2) and port d with -1/sqrt(2);
// node-2 photons with +1/sqrt(2) at both. The two 1/sqrt(2) factors are
// folded into the overall 1/2 below.
inline double node1_port_sign(Port p) { return p == Port::c ? 1.0 : -1.0; }
}  // namespace detail

/// Projects the two-node output state onto a detection of an H photon at
/// t_h and a V photon at t_v in the ports given by `pattern`.
inline ConditionalState conditional_state(const EmissionRecord& rec_a,
                                          const EmissionRecord& rec_b,
                                          const JonesElement& jones_a,
                                          const JonesElement& jones_b,
                                          const HeraldPattern& pattern,
                                          double t_h, double t_v) {
  if (!rec_a.grid.same_as(rec_b.grid))
    throw std::invalid_argument("conditional_state: records must share a time grid");
  if (!rec_a.grid.contains(t_h) || !rec_a.grid.contains(t_v))
    throw std::invalid_argument("conditional_state: detection time outside the record grid");

  // Per branch: H component at t_h and V component at t_v, after Jones.
  std::array<complexd, 2> a_h, a_v, b_h, b_v;
  for (int x = 0; x < 2; ++x) {
    a_h[x] = rec_a.polarization(x, t_h, jones_a.m)(kPolH);
    a_v[x] = rec_a.polarization(x, t_v, jones_a.m)(kPolV);
    b_h[x] = rec_b.polarization(x, t_h, jones_b.m)(kPolH);
    b_v[x] = rec_b.polarization(x, t_v, jones_b.m)(kPolV);
  }

  const double sig_h = detail::node1_port_sign(pattern.port_h);
  const double sig_v = detail::node1_port_sign(pattern.port_v);

  ConditionalState st;
  st.t_h = t_h;
  st.t_v = t_v;
  for (int xa = 0; xa < 2; ++xa) {
    for (int xb = 0; xb < 2; ++xb) {
      // Either node 1 supplies the H click and node 2 the V click, or vice
      // versa; the node-1 port sign rides with whichever click it supplies.
      const complexd amp = 0.5 * (sig_h * a_h[xa] * b_v[xb] + sig_v * a_v[xa] * b_h[xb]);
      st.amps(2 * xa + xb) = std::conj(amp);
    }
  }
  return st;
}

/// Overlap fidelity with the Bell state (|ud> + sign |du>)/sqrt(2).
inline double raw_fidelity(const ConditionalState& state, int bell_sign) {
  const double n2 = state.norm2();
  if (n2 <= 0.0) throw std::domain_error("raw_fidelity: zero-norm herald event");
  const complexd overlap =
      (state.amps(1) + static_cast<double>(bell_sign) * state.amps(2)) / std::sqrt(2.0);
  return std::norm(overlap) / n2;
}

/// Joint detection probability density of the herald event.
inline double herald_density(const ConditionalState& state) { return state.norm2(); }

}  // namespace cavbell
