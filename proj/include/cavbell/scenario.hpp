#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavbell/emission.hpp"
#include "cavbell/evolve.hpp"
#include "cavbell/landscape.hpp"
#include "cavbell/params.hpp"
#include "cavbell/tradeoff.hpp"

namespace cavbell {

/// Full description of one two-node experiment.
struct ScenarioConfig {
  int schema_version = 1;
  std::string name = "scenario";
  SystemParams node_a{};
  SystemParams node_b{};
  JonesElement jones_a{};
  JonesElement jones_b{};
  HeraldPattern pattern{Port::c, Port::c};
  std::size_t resolution = 256;       // landscape cells per axis
  std::size_t ode_min_samples = 4096; // lower bound; step limit may raise it
  double decay_tail = 6.0;            // window past the drive, units 1/kappa
  std::vector<double> thresholds{0.99, 0.999};
  std::vector<double> omega_b_values;  // study list; empty = node_b's value
  std::vector<double> sweep_delta_b;   // deliberate-birefringence sweep
  std::optional<double> branching_ratio;
  bool corrections_both_nodes = false;
  std::string output_dir = "out";
};

inline void validate(const ScenarioConfig& c) {
  validate(c.node_a);
  validate(c.node_b);
  validate(c.jones_a);
  validate(c.jones_b);
  if (c.resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  if (c.decay_tail < 4.0) throw std::invalid_argument("decay_tail must be >= 4/kappa");
  for (double t : c.thresholds)
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("thresholds must lie in (0, 1]");
  for (double w : c.omega_b_values)
    if (w < 0.0) throw std::invalid_argument("omega_b_values must be >= 0");
  if (!c.sweep_delta_b.empty()) {
    for (std::size_t i = 0; i + 1 < c.sweep_delta_b.size(); ++i)
      if (!(c.sweep_delta_b[i] < c.sweep_delta_b[i + 1]))
        throw std::invalid_argument("sweep_delta_b must be ascending");
    if (c.sweep_delta_b.front() < 0.0)
      throw std::invalid_argument("sweep_delta_b must be >= 0");
  }
  if (c.branching_ratio) {
    validate_branching(c.node_a, *c.branching_ratio);
    validate_branching(c.node_b, *c.branching_ratio);
  }
}

/// Sets the pump detunings of `p` for resonant Raman emission into the
/// deliberately split modes: the up branch targets the H mode at
/// +delta_b/2, the down branch the V mode at -delta_b/2.
inline void retune_for_resonance(SystemParams& p, double delta_b) {
  p.birefringence.delta_b = delta_b;
  p.drive[0].detuning = p.cavity_detuning - p.delta_zeeman + 0.5 * delta_b;
  p.drive[1].detuning = p.cavity_detuning - 0.5 * delta_b;
}

struct RunResult {
  ScenarioConfig config;       // as executed (omega_b etc. resolved)
  AmplitudeTrajectory traj_a;
  AmplitudeTrajectory traj_b;
  EmissionRecord rec_a;
  EmissionRecord rec_b;
  HeraldLandscape landscape;
  TradeoffCurve tradeoff_raw;
  TradeoffCurve tradeoff_corrected;
  double f_avg_raw = 0.0;
  double f_avg_corrected = 0.0;
  double emission_prob_a = 0.0;
  double emission_prob_b = 0.0;
  double photon_duration_a = 0.0;
};

inline TimeGrid scenario_ode_grid(const ScenarioConfig& c, const SystemParams& node) {
  return default_grid(node, c.decay_tail, c.ode_min_samples);
}

/// Runs one two-node scenario end to end: evolve both nodes, extract the
/// wavepackets, evaluate the herald landscape and both trade-off curves.
inline RunResult run_scenario(const ScenarioConfig& config, unsigned threads = 1) {
  validate(config);
  if (config.node_a.birefringence.omega_b != 0.0)
    throw std::invalid_argument("run_scenario: node 1 must be free of undesired birefringence");

  RunResult r;
  r.config = config;

  // Shared window so the records live on a common grid.
  const double t_end = std::max(config.node_a.drive_window_end(),
                                config.node_b.drive_window_end()) +
                       config.decay_tail;
  const double step = std::min(max_step(config.node_a), max_step(config.node_b));
  auto n = static_cast<std::size_t>(std::ceil(t_end / step)) + 1;
  n = std::max(n, config.ode_min_samples);
  const TimeGrid grid(0.0, t_end, n);

  r.traj_a = evolve(config.node_a, grid, SingleExcitationState::ground());
  r.traj_b = evolve(config.node_b, grid, SingleExcitationState::ground());
  r.rec_a = extract_emission(r.traj_a, config.node_a);
  r.rec_b = extract_emission(r.traj_b, config.node_b);
  r.emission_prob_a = r.rec_a.total_norm2();
  r.emission_prob_b = r.rec_b.total_norm2();
  r.photon_duration_a = emission_duration(r.rec_a);

  const TimeGrid axis(0.0, t_end, config.resolution);
  r.landscape = build_landscape(r.rec_a, r.rec_b, config.jones_a, config.jones_b,
                                config.pattern, axis, threads);
  r.f_avg_raw = integrated_raw_fidelity(r.landscape);
  r.f_avg_corrected = integrated_corrected_fidelity(r.landscape);
  r.tradeoff_raw = tradeoff_curve_raw(r.landscape, config.thresholds);
  r.tradeoff_corrected = tradeoff_curve_corrected(r.landscape, config.thresholds);
  return r;
}

/// The per-omega_b study ("fig2"/"fig3" style): one run per entry of
/// omega_b_values applied to the birefringent node.
inline std::vector<RunResult> run_study(const ScenarioConfig& config,
                                        unsigned threads = 1) {
  std::vector<double> values = config.omega_b_values;
  if (values.empty()) values.push_back(config.node_b.birefringence.omega_b);
  std::vector<RunResult> out;
  out.reserve(values.size());
  for (double w : values) {
    ScenarioConfig c = config;
    c.omega_b_values.clear();
    c.node_b.birefringence.omega_b = w;
    out.push_back(run_scenario(c, threads));
  }
  return out;
}

/// Fidelity and success probability against deliberate birefringence.
struct SweepResult {
  std::vector<double> delta_b;
  std::vector<double> f_avg_raw;
  std::vector<double> f_avg_corrected;
  std::vector<double> success_prob;
};

/// Sweeps the deliberate splitting delta_b over both nodes, retuning the
/// pump tones of each node for resonant emission into the split modes; the
/// pulse envelopes and peak Rabi frequencies stay fixed.
inline SweepResult sweep_deliberate(const ScenarioConfig& config,
                                    const std::vector<double>& delta_b_values,
                                    unsigned threads = 1) {
  if (delta_b_values.empty())
    throw std::invalid_argument("sweep_deliberate: empty delta_b list");
  for (std::size_t i = 0; i + 1 < delta_b_values.size(); ++i)
    if (!(delta_b_values[i] < delta_b_values[i + 1]))
      throw std::invalid_argument("sweep_deliberate: delta_b list must be ascending");

  SweepResult sweep;
  for (const double db : delta_b_values) {
    ScenarioConfig c = config;
    retune_for_resonance(c.node_a, db);
    retune_for_resonance(c.node_b, db);
    const RunResult r = run_scenario(c, threads);
    sweep.delta_b.push_back(db);
    sweep.f_avg_raw.push_back(r.f_avg_raw);
    sweep.f_avg_corrected.push_back(r.f_avg_corrected);
    sweep.success_prob.push_back(r.landscape.success_total);
  }
  return sweep;
}

}  // namespace cavbell
