// Command-line front end: scenario runs, deliberate-birefringence sweeps,
// trade-off curves from saved landscapes, trajectory export, calibration.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavbell/cavbell.hpp"

namespace {

using namespace cavbell;

std::string omega_dir_name(double omega_b) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "omega_b_%g", omega_b);
  return std::string(buf);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return std::string(buf);
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  unsigned threads = default_thread_count();
  std::size_t resolution = 0;  // 0 = keep config value
  std::string pattern;
};

ScenarioConfig load_with_overrides(const CommonOpts& o) {
  ScenarioConfig cfg = load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.resolution > 0) cfg.resolution = o.resolution;
  if (!o.pattern.empty()) cfg.pattern = cfg_detail::pattern_from(o.pattern);
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
  if (needs_config)
    cmd->add_option("config,--config", o.config_path, "scenario config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
  cmd->add_option("--threads", o.threads, "worker threads for landscape cells");
  cmd->add_option("--resolution", o.resolution, "landscape cells per axis");
  cmd->add_option("--pattern", o.pattern, "herald pattern: cc, cd, dc or dd");
}

int cmd_run(const CommonOpts& o) {
  const ScenarioConfig cfg = load_with_overrides(o);
  const std::vector<RunResult> runs = run_study(cfg, o.threads);

  nlohmann::json summary;
  summary["name"] = cfg.name;
  summary["scenario_hash"] = scenario_hash(cfg);
  summary["generated_at"] = timestamp_utc();  // metadata only
  summary["runs"] = nlohmann::json::array();
  for (const RunResult& r : runs) {
    const std::string dir =
        cfg.output_dir + "/" + omega_dir_name(r.config.node_b.birefringence.omega_b);
    write_outputs(r, dir);
    nlohmann::json js = run_summary_json(r);
    js["directory"] = dir;
    summary["runs"].push_back(js);
    std::cout << cfg.name << " omega_b=" << r.config.node_b.birefringence.omega_b
              << "  F_raw=" << r.f_avg_raw << "  F_corr=" << r.f_avg_corrected
              << "  success=" << r.landscape.success_total << "\n";
  }
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream(cfg.output_dir + "/summary.json") << summary.dump(2) << "\n";
  std::cout << "wrote " << cfg.output_dir << "/summary.json\n";
  return 0;
}

int cmd_sweep(const CommonOpts& o) {
  const ScenarioConfig cfg = load_with_overrides(o);
  if (cfg.sweep_delta_b.empty())
    throw std::runtime_error("config has no sweep_delta_b list");
  const SweepResult sweep = sweep_deliberate(cfg, cfg.sweep_delta_b, o.threads);

  std::filesystem::create_directories(cfg.output_dir);
  write_sweep_csv(sweep, cfg.output_dir + "/sweep.csv");
  write_sweep_svg(sweep, cfg.name + ": deliberate birefringence", cfg.output_dir + "/sweep.svg");

  nlohmann::json summary;
  summary["name"] = cfg.name;
  summary["scenario_hash"] = scenario_hash(cfg);
  summary["generated_at"] = timestamp_utc();
  summary["delta_b"] = sweep.delta_b;
  summary["f_avg_raw"] = sweep.f_avg_raw;
  summary["f_avg_corrected"] = sweep.f_avg_corrected;
  summary["success_probability"] = sweep.success_prob;
  std::ofstream(cfg.output_dir + "/summary.json") << summary.dump(2) << "\n";

  for (std::size_t i = 0; i < sweep.delta_b.size(); ++i)
    std::cout << "delta_b=" << sweep.delta_b[i] << "  F_raw=" << sweep.f_avg_raw[i]
              << "  F_corr=" << sweep.f_avg_corrected[i]
              << "  success=" << sweep.success_prob[i] << "\n";
  return 0;
}

int cmd_tradeoff(const std::string& landscape_path, const std::string& out_dir,
                 const std::vector<double>& thresholds) {
  const HeraldLandscape ls = read_landscape_csv(landscape_path);
  const std::string dir =
      out_dir.empty() ? std::filesystem::path(landscape_path).parent_path().string() : out_dir;
  const std::string base = dir.empty() ? std::string(".") : dir;
  const TradeoffCurve raw = tradeoff_curve_raw(ls, thresholds);
  const TradeoffCurve corr = tradeoff_curve_corrected(ls, thresholds);
  write_tradeoff_csv(raw, base + "/tradeoff_raw.csv");
  write_tradeoff_csv(corr, base + "/tradeoff_corrected.csv");
  std::cout << "total success probability: " << raw.total << "\n";
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    std::cout << "avg >= " << thresholds[i] << ": retained raw=" << raw.retained_at_avg[i]
              << " corrected=" << corr.retained_at_avg[i] << "\n";
  std::cout << "wrote " << base << "/tradeoff_raw.csv and tradeoff_corrected.csv\n";
  return 0;
}

int cmd_trajectory(const CommonOpts& o) {
  const ScenarioConfig cfg = load_with_overrides(o);
  const TimeGrid grid = scenario_ode_grid(cfg, cfg.node_b);
  std::filesystem::create_directories(cfg.output_dir);
  for (const auto& [node, tag] :
       {std::pair{&cfg.node_a, "node1"}, std::pair{&cfg.node_b, "node2"}}) {
    const AmplitudeTrajectory traj = evolve(*node, grid, SingleExcitationState::ground());
    write_trajectory_csv(traj, cfg.output_dir + "/trajectory_" + tag + ".csv");
    write_emission_csv(extract_emission(traj, *node), cfg.output_dir + "/emission_" + tag + ".csv");
  }
  std::cout << "wrote trajectories and emission records to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_calibrate(const CommonOpts& o, double target_duration) {
  const ScenarioConfig cfg = load_with_overrides(o);
  const double peak = calibrate_rabi_peak(cfg.node_a, target_duration);
  const double dur = emission_duration_at_peak(cfg.node_a, peak);
  std::cout << "calibrated rabi_peak=" << std::setprecision(17) << peak
            << " (5-95% duration " << dur << "/kappa, target " << target_duration << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-node heralded entanglement simulator for birefringent cavities"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, traj_opts, cal_opts;
  std::string landscape_path, tradeoff_out;
  std::vector<double> tradeoff_thresholds{0.99, 0.999};
  double cal_target = 6.0;

  add_common(app.add_subcommand("run", "evaluate herald landscapes for a scenario"), run_opts);
  add_common(app.add_subcommand("sweep", "sweep deliberate birefringence"), sweep_opts);
  auto* tr = app.add_subcommand("tradeoff", "trade-off curves from a saved landscape CSV");
  tr->add_option("landscape", landscape_path, "landscape.csv produced by run")
      ->required()
      ->check(CLI::ExistingFile);
  tr->add_option("--out", tradeoff_out, "output directory (default: alongside input)");
  tr->add_option("--thresholds", tradeoff_thresholds, "average-fidelity thresholds");
  add_common(app.add_subcommand("trajectory", "export node trajectories and wavepackets"),
             traj_opts);
  auto* cal = app.add_subcommand("calibrate", "find the pump peak for a target photon length");
  add_common(cal, cal_opts);
  cal->add_option("--duration", cal_target, "target 5-95% photon duration (1/kappa)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(run_opts);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_opts);
    if (app.got_subcommand("tradeoff"))
      return cmd_tradeoff(landscape_path, tradeoff_out, tradeoff_thresholds);
    if (app.got_subcommand("trajectory")) return cmd_trajectory(traj_opts);
    if (app.got_subcommand("calibrate")) return cmd_calibrate(cal_opts, cal_target);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
