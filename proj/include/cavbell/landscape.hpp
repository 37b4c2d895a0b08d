#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavbell/correction.hpp"
#include "cavbell/herald.hpp"
#include "cavbell/parallel.hpp"

namespace cavbell {

/// Square field over detection-time pairs (t_h along rows, t_v along
/// columns), row-major.
struct HeraldLandscape {
  TimeGrid axis;
  HeraldPattern pattern{};
  int bell_sign = +1;
  std::vector<double> f_raw;
  std::vector<double> f_corr;
  std::vector<double> density;
  std::vector<double> corr_angle;
  std::vector<double> corr_azimuth;
  // Success probability summed over all four herald patterns and the full
  // time square; the per-pattern densities above integrate to a share of it.
  double success_total = 0.0;

  std::size_t size() const { return f_raw.size(); }
  std::size_t index(std::size_t ih, std::size_t iv) const { return ih * axis.n + iv; }
  bool empty() const { return f_raw.empty(); }
};

/// Evaluates fidelities, densities and per-event corrections on a square
/// grid of detection times. Cells with zero density carry NaN fidelities
/// (missing data).
inline HeraldLandscape build_landscape(const EmissionRecord& rec_a,
                                       const EmissionRecord& rec_b,
                                       const JonesElement& jones_a,
                                       const JonesElement& jones_b,
                                       const HeraldPattern& pattern,
                                       const TimeGrid& axis,
                                       unsigned threads = 1) {
  HeraldLandscape ls;
  ls.axis = axis;
  ls.pattern = pattern;
  ls.bell_sign = bell_sign_for(pattern);
  const std::size_t n = axis.n;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ls.f_raw.assign(n * n, nan);
  ls.f_corr.assign(n * n, nan);
  ls.density.assign(n * n, 0.0);
  ls.corr_angle.assign(n * n, nan);
  ls.corr_azimuth.assign(n * n, nan);

  parallel_for(n, threads, [&](std::size_t ih) {
    const double t_h = axis.time(ih);
    for (std::size_t iv = 0; iv < n; ++iv) {
      const double t_v = axis.time(iv);
      const ConditionalState st =
          conditional_state(rec_a, rec_b, jones_a, jones_b, pattern, t_h, t_v);
      const std::size_t k = ls.index(ih, iv);
      const double rho = herald_density(st);
      ls.density[k] = rho;
      if (rho <= 0.0) continue;
      ls.f_raw[k] = raw_fidelity(st, ls.bell_sign);
      const CorrectionResult corr = optimal_correction(st, ls.bell_sign);
      ls.f_corr[k] = corr.fidelity_corrected;
      ls.corr_angle[k] = corr.rotation_angle;
      ls.corr_azimuth[k] = corr.azimuth;
    }
  });

  // All-pattern success probability: summing |amps|^2 over the four port
  // patterns equals the pre-splitter two-photon probability, so this is
  // exact regardless of node symmetry.
  const auto wt = trapezoid_weights(axis);
  const HeraldPattern pats[4] = {{Port::c, Port::c}, {Port::c, Port::d},
                                 {Port::d, Port::c}, {Port::d, Port::d}};
  std::vector<double> rowsum(n, 0.0);
  parallel_for(n, threads, [&](std::size_t ih) {
    const double t_h = axis.time(ih);
    double acc = 0.0;
    for (std::size_t iv = 0; iv < n; ++iv) {
      const double t_v = axis.time(iv);
      double cell = 0.0;
      for (const auto& p : pats)
        cell += conditional_state(rec_a, rec_b, jones_a, jones_b, p, t_h, t_v).norm2();
      acc += wt[iv] * cell;
    }
    rowsum[ih] = acc;
  });
  double total = 0.0;
  for (std::size_t ih = 0; ih < n; ++ih) total += wt[ih] * rowsum[ih];
  ls.success_total = total;
  return ls;
}

/// 2-D trapezoidal integral of `field` over the landscape square; NaN cells
/// count as zero (they carry zero density).
inline double integrate_field(const HeraldLandscape& ls, const std::vector<double>& field) {
  const auto wt = trapezoid_weights(ls.axis);
  double total = 0.0;
  for (std::size_t ih = 0; ih < ls.axis.n; ++ih) {
    double row = 0.0;
    for (std::size_t iv = 0; iv < ls.axis.n; ++iv) {
      const double v = field[ls.index(ih, iv)];
      if (std::isnan(v)) continue;
      row += wt[iv] * v;
    }
    total += wt[ih] * row;
  }
  return total;
}

/// Density-weighted average fidelity over an optional cell mask.
inline double integrated_fidelity(const HeraldLandscape& ls,
                                  const std::vector<double>& fidelity,
                                  const std::vector<char>* mask = nullptr) {
  const auto wt = trapezoid_weights(ls.axis);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t ih = 0; ih < ls.axis.n; ++ih) {
    for (std::size_t iv = 0; iv < ls.axis.n; ++iv) {
      const std::size_t k = ls.index(ih, iv);
      if (mask && !(*mask)[k]) continue;
      const double rho = ls.density[k];
      if (rho <= 0.0) continue;
      const double w = wt[ih] * wt[iv] * rho;
      num += w * fidelity[k];
      den += w;
    }
  }
  if (den <= 0.0) throw std::domain_error("integrated_fidelity: region has zero density");
  return num / den;
}

inline double integrated_raw_fidelity(const HeraldLandscape& ls) {
  return integrated_fidelity(ls, ls.f_raw);
}

inline double integrated_corrected_fidelity(const HeraldLandscape& ls) {
  return integrated_fidelity(ls, ls.f_corr);
}

}  // namespace cavbell
