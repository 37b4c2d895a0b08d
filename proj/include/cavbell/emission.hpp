#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cavbell/evolve.hpp"
#include "cavbell/params.hpp"
#include "cavbell/time_grid.hpp"

namespace cavbell {

enum Pol : int { kPolH = 0, kPolV = 1 };

/// Output wavepacket matrix of one node. w[x][y](t) is the field amplitude
/// arriving at detector polarization y at time t, given the branch that
/// ideally emits x (branch H = atomic up, branch V = atomic down). The
/// diagonal holds the usual alpha_H, alpha_V wavepackets; off-diagonal
/// entries are the birefringence-induced cross components.
struct EmissionRecord {
  TimeGrid grid;
  std::array<std::array<std::vector<complexd>, 2>, 2> w{};

  /// Linear interpolation of w[x][y] at time t (0 outside the grid).
  complexd sample(int x, int y, double t) const {
    if (t < grid.t0 || t > grid.t1) return complexd(0.0, 0.0);
    const double u = (t - grid.t0) / grid.dt();
    auto i = static_cast<std::size_t>(u);
    if (i >= grid.n - 1) return w[x][y].back();
    const double f = u - static_cast<double>(i);
    return (1.0 - f) * w[x][y][i] + f * w[x][y][i + 1];
  }

  /// Jones-transformed 2-vector (H, V components) of branch x at time t.
  Eigen::Vector2cd polarization(int x, double t, const Eigen::Matrix2cd& jones) const {
    Eigen::Vector2cd v(sample(x, kPolH, t), sample(x, kPolV, t));
    return jones * v;
  }

  /// Trapezoidal squared norm of component w[x][y]: the emission probability
  /// into detector polarization y from branch x.
  double norm2(int x, int y) const {
    const auto wt = trapezoid_weights(grid);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) s += wt[i] * std::norm(w[x][y][i]);
    return s;
  }

  /// Total emission probability of branch x.
  double branch_norm2(int x) const { return norm2(x, kPolH) + norm2(x, kPolV); }

  /// Total emission probability of the node.
  double total_norm2() const { return branch_norm2(kPolH) + branch_norm2(kPolV); }
};

/// Reads the output wavepackets off a trajectory: w[x][y](t) =
/// sqrt(2 kappa_y) * amplitude of |s(x), 1_y> with s(H) = up, s(V) = down.
inline EmissionRecord extract_emission(const AmplitudeTrajectory& traj,
                                       const SystemParams& p) {
  EmissionRecord rec;
  rec.grid = traj.grid;
  const double fh = std::sqrt(2.0 * p.kappa_h);
  const double fv = std::sqrt(2.0 * p.kappa_v);
  const std::size_t n = traj.grid.n;
  for (auto& row : rec.w)
    for (auto& col : row) col.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector6cd& s = traj.states[i];
    rec.w[kPolH][kPolH][i] = fh * s(kUpH);
    rec.w[kPolH][kPolV][i] = fv * s(kUpV);
    rec.w[kPolV][kPolH][i] = fh * s(kDownH);
    rec.w[kPolV][kPolV][i] = fv * s(kDownV);
  }
  return rec;
}

/// 5%-95% crossing duration of the cumulative emission probability.
inline double emission_duration(const EmissionRecord& rec, double lo_frac = 0.05,
                                double hi_frac = 0.95) {
  const auto wt = trapezoid_weights(rec.grid);
  std::vector<double> cum(rec.grid.n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rec.grid.n; ++i) {
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) total += wt[i] * std::norm(rec.w[x][y][i]);
    cum[i] = total;
  }
  if (total <= 0.0) throw std::runtime_error("emission_duration: no emission");
  auto crossing = [&](double frac) {
    const double target = frac * total;
    for (std::size_t i = 1; i < cum.size(); ++i) {
      if (cum[i] >= target) {
        const double f = (target - cum[i - 1]) / (cum[i] - cum[i - 1]);
        return rec.grid.time(i - 1) + f * rec.grid.dt();
      }
    }
    return rec.grid.t1;
  };
  return crossing(hi_frac) - crossing(lo_frac);
}

}  // namespace cavbell
