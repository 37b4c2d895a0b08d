#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cavbell/landscape.hpp"

namespace cavbell {

/// Retained success probability against a minimum-fidelity cutoff, built by
/// admitting cells in order of decreasing fidelity. Also records, for each
/// requested average-fidelity threshold, the probability retained by the
/// largest high-fidelity-first region whose weighted average still meets it.
struct TradeoffCurve {
  std::vector<double> threshold;  // minimum fidelity of the retained region
  std::vector<double> retained;   // absolute retained success probability
  std::vector<double> avg_thresholds;      // e.g. {0.99, 0.999}
  std::vector<double> retained_at_avg;     // probability at each avg threshold
  double total = 0.0;                      // unfiltered success probability
};

inline TradeoffCurve tradeoff_curve(const HeraldLandscape& ls,
                                    const std::vector<double>& fidelity,
                                    const std::vector<double>& avg_thresholds = {0.99, 0.999}) {
  if (ls.empty()) throw std::invalid_argument("tradeoff_curve: empty landscape");

  const auto wt = trapezoid_weights(ls.axis);
  const std::size_t n = ls.axis.n;
  std::vector<double> weight(n * n, 0.0);
  std::vector<std::size_t> order;
  order.reserve(n * n);
  for (std::size_t ih = 0; ih < n; ++ih) {
    for (std::size_t iv = 0; iv < n; ++iv) {
      const std::size_t k = ls.index(ih, iv);
      weight[k] = wt[ih] * wt[iv] * ls.density[k];
      if (weight[k] > 0.0 && !std::isnan(fidelity[k])) order.push_back(k);
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fidelity[a] != fidelity[b]) return fidelity[a] > fidelity[b];
    return a < b;  // deterministic tie-break
  });

  // Per-pattern integral -> scheme probability uses the landscape's
  // all-pattern total as normalization anchor.
  double pattern_integral = 0.0;
  for (const std::size_t k : order) pattern_integral += weight[k];
  const double scale =
      pattern_integral > 0.0 ? ls.success_total / pattern_integral : 0.0;

  TradeoffCurve curve;
  curve.total = ls.success_total;
  curve.threshold.reserve(order.size());
  curve.retained.reserve(order.size());
  curve.avg_thresholds = avg_thresholds;
  curve.retained_at_avg.assign(avg_thresholds.size(), 0.0);

  double cum = 0.0;
  double cum_f = 0.0;
  for (const std::size_t k : order) {
    cum += weight[k];
    cum_f += weight[k] * fidelity[k];
    curve.threshold.push_back(fidelity[k]);
    curve.retained.push_back(cum * scale);
    const double avg = cum_f / cum;
    for (std::size_t j = 0; j < avg_thresholds.size(); ++j) {
      if (avg >= avg_thresholds[j]) curve.retained_at_avg[j] = cum * scale;
    }
  }
  return curve;
}

inline TradeoffCurve tradeoff_curve_raw(const HeraldLandscape& ls,
                                        const std::vector<double>& avg_thresholds = {0.99, 0.999}) {
  return tradeoff_curve(ls, ls.f_raw, avg_thresholds);
}

inline TradeoffCurve tradeoff_curve_corrected(const HeraldLandscape& ls,
                                              const std::vector<double>& avg_thresholds = {0.99, 0.999}) {
  return tradeoff_curve(ls, ls.f_corr, avg_thresholds);
}

/// Retained probability for a minimum-fidelity cutoff read off the curve.
inline double retained_at_min_fidelity(const TradeoffCurve& c, double min_fidelity) {
  double best = 0.0;
  for (std::size_t i = 0; i < c.threshold.size(); ++i) {
    if (c.threshold[i] >= min_fidelity) best = c.retained[i];
  }
  return best;
}

}  // namespace cavbell
