#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cavbell/emission.hpp"
#include "cavbell/evolve.hpp"
#include "cavbell/params.hpp"

namespace cavbell {

/// 5%-95% emission duration obtained with both pump peaks set to `peak`.
inline double emission_duration_at_peak(SystemParams p, double peak,
                                        double tail = 6.0) {
  p.drive[0].rabi_peak = peak;
  p.drive[1].rabi_peak = peak;
  const TimeGrid grid = default_grid(p, tail);
  const AmplitudeTrajectory traj = evolve(p, grid, SingleExcitationState::ground());
  return emission_duration(extract_emission(traj, p));
}

/// Finds the common pump peak that makes the emitted photon's 5%-95%
/// duration equal `target_duration`. Bisection on log(peak); the duration
/// shrinks as the drive strengthens.
inline double calibrate_rabi_peak(const SystemParams& base, double target_duration,
                                  double lo = 0.02, double hi = 50.0,
                                  int iters = 60) {
  auto dur = [&](double s) { return emission_duration_at_peak(base, s); };

  double flo = dur(lo);
  double fhi = dur(hi);
  if (!(flo > target_duration && fhi < target_duration)) {
    // scan for a bracketing pair before giving up
    const int scan = 25;
    std::vector<double> xs(scan), fs(scan);
    for (int i = 0; i < scan; ++i) {
      xs[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (scan - 1));
      fs[i] = dur(xs[i]);
    }
    bool found = false;
    for (int i = 0; i + 1 < scan; ++i) {
      if (fs[i] > target_duration && fs[i + 1] < target_duration) {
        lo = xs[i];
        hi = xs[i + 1];
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("calibrate_rabi_peak: target duration not bracketed");
  }

  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (llo + lhi);
    if (dur(std::exp(mid)) > target_duration)
      llo = mid;
    else
      lhi = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

}  // namespace cavbell
