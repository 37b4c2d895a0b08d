#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavbell/scenario.hpp"

namespace cavbell {

/// Parse/validation failure carrying one message per offending field.
struct ConfigError : std::runtime_error {
  std::vector<std::string> errors;

  explicit ConfigError(std::vector<std::string> errs)
      : std::runtime_error(join(errs)), errors(std::move(errs)) {}

  static std::string join(const std::vector<std::string>& errs) {
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& e : errs) os << "\n  - " << e;
    return os.str();
  }
};

namespace cfg_detail {

using nlohmann::json;

inline json to_json(const complexd& z) { return json::array({z.real(), z.imag()}); }

inline complexd complex_from(const json& j) {
  if (j.is_number()) return complexd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return complexd(j.at(0).get<double>(), j.at(1).get<double>());
  throw std::invalid_argument("expected number or [re, im] pair");
}

inline json to_json(const Eigen::Matrix2cd& m) {
  return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                      json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

inline Eigen::Matrix2cd matrix_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected 2x2 matrix");
  Eigen::Matrix2cd m;
  for (int r = 0; r < 2; ++r) {
    if (!j.at(r).is_array() || j.at(r).size() != 2)
      throw std::invalid_argument("expected 2x2 matrix");
    for (int c = 0; c < 2; ++c) m(r, c) = complex_from(j.at(r).at(c));
  }
  return m;
}

inline std::string shape_name(EnvelopeShape s) {
  return s == EnvelopeShape::sin2 ? "sin2" : "flattop";
}

inline EnvelopeShape shape_from(const std::string& s) {
  if (s == "sin2") return EnvelopeShape::sin2;
  if (s == "flattop") return EnvelopeShape::flattop;
  throw std::invalid_argument("unknown envelope shape '" + s + "'");
}

inline json to_json(const DriveTone& t) {
  json j;
  j["rabi_peak"] = t.rabi_peak;
  j["detuning"] = t.detuning;
  j["envelope"] = {{"shape", shape_name(t.envelope.shape)},
                   {"duration", t.envelope.duration},
                   {"t_start", t.envelope.t_start}};
  if (t.envelope.shape == EnvelopeShape::flattop)
    j["envelope"]["edge"] = t.envelope.edge;
  return j;
}

inline json to_json(const SystemParams& p) {
  json j;
  j["g_up"] = to_json(p.g_up);
  j["g_down"] = to_json(p.g_down);
  j["kappa_h"] = p.kappa_h;
  j["kappa_v"] = p.kappa_v;
  j["gamma"] = p.gamma;
  j["delta_zeeman"] = p.delta_zeeman;
  j["cavity_detuning"] = p.cavity_detuning;
  j["birefringence"] = {{"omega_b", p.birefringence.omega_b},
                        {"delta_b", p.birefringence.delta_b},
                        {"theta_b", p.birefringence.theta_b}};
  j["drive"] = json::array({to_json(p.drive[0]), to_json(p.drive[1])});
  j["emission_basis"] = to_json(p.emission_basis);
  return j;
}

template <typename Fn>
void field(std::vector<std::string>& errs, const std::string& path, const Fn& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    errs.push_back(path + ": " + e.what());
  }
}

inline DriveTone tone_from(const json& j, const std::string& path,
                           std::vector<std::string>& errs) {
  DriveTone t;
  field(errs, path + ".rabi_peak", [&] { t.rabi_peak = j.at("rabi_peak").get<double>(); });
  field(errs, path + ".detuning", [&] { t.detuning = j.at("detuning").get<double>(); });
  field(errs, path + ".envelope", [&] {
    const json& e = j.at("envelope");
    t.envelope.shape = shape_from(e.at("shape").get<std::string>());
    t.envelope.duration = e.at("duration").get<double>();
    t.envelope.t_start = e.value("t_start", 0.0);
    t.envelope.edge = e.value("edge", 1.0);
  });
  return t;
}

inline SystemParams params_from(const json& j, const std::string& path,
                                std::vector<std::string>& errs) {
  SystemParams p;
  field(errs, path + ".g_up", [&] { p.g_up = complex_from(j.at("g_up")); });
  field(errs, path + ".g_down", [&] { p.g_down = complex_from(j.at("g_down")); });
  field(errs, path + ".kappa_h", [&] { p.kappa_h = j.at("kappa_h").get<double>(); });
  field(errs, path + ".kappa_v", [&] { p.kappa_v = j.at("kappa_v").get<double>(); });
  field(errs, path + ".gamma", [&] { p.gamma = j.at("gamma").get<double>(); });
  field(errs, path + ".delta_zeeman",
        [&] { p.delta_zeeman = j.value("delta_zeeman", 0.0); });
  field(errs, path + ".cavity_detuning",
        [&] { p.cavity_detuning = j.value("cavity_detuning", 0.0); });
  field(errs, path + ".birefringence", [&] {
    if (!j.contains("birefringence")) return;
    const json& b = j.at("birefringence");
    p.birefringence.omega_b = b.value("omega_b", 0.0);
    p.birefringence.delta_b = b.value("delta_b", 0.0);
    p.birefringence.theta_b = b.value("theta_b", 0.0);
  });
  field(errs, path + ".drive", [&] {
    const json& d = j.at("drive");
    if (!d.is_array() || d.size() != 2)
      throw std::invalid_argument("expected exactly two drive tones");
    p.drive[0] = tone_from(d.at(0), path + ".drive[0]", errs);
    p.drive[1] = tone_from(d.at(1), path + ".drive[1]", errs);
  });
  field(errs, path + ".emission_basis", [&] {
    if (j.contains("emission_basis")) p.emission_basis = matrix_from(j.at("emission_basis"));
  });
  field(errs, path, [&] { validate(p); });
  return p;
}

inline std::string pattern_name(const HeraldPattern& p) {
  std::string s;
  s += p.port_h == Port::c ? 'c' : 'd';
  s += p.port_v == Port::c ? 'c' : 'd';
  return s;
}

inline HeraldPattern pattern_from(const std::string& s) {
  if (s.size() != 2 || (s[0] != 'c' && s[0] != 'd') || (s[1] != 'c' && s[1] != 'd'))
    throw std::invalid_argument("pattern must be one of cc, cd, dc, dd");
  return HeraldPattern{s[0] == 'c' ? Port::c : Port::d,
                       s[1] == 'c' ? Port::c : Port::d};
}

}  // namespace cfg_detail

inline nlohmann::json to_json(const ScenarioConfig& c) {
  using cfg_detail::to_json;
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["node_a"] = to_json(c.node_a);
  j["node_b"] = to_json(c.node_b);
  j["jones_a"] = to_json(c.jones_a.m);
  j["jones_b"] = to_json(c.jones_b.m);
  j["pattern"] = cfg_detail::pattern_name(c.pattern);
  j["resolution"] = c.resolution;
  j["ode_min_samples"] = c.ode_min_samples;
  j["decay_tail"] = c.decay_tail;
  j["thresholds"] = c.thresholds;
  j["omega_b_values"] = c.omega_b_values;
  j["sweep_delta_b"] = c.sweep_delta_b;
  if (c.branching_ratio) j["branching_ratio"] = *c.branching_ratio;
  j["corrections_both_nodes"] = c.corrections_both_nodes;
  j["output_dir"] = c.output_dir;
  return j;
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  using namespace cfg_detail;
  std::vector<std::string> errs;
  ScenarioConfig c;
  field(errs, "schema_version", [&] {
    c.schema_version = j.value("schema_version", 1);
    if (c.schema_version != 1) throw std::invalid_argument("unsupported schema version");
  });
  field(errs, "name", [&] { c.name = j.value("name", std::string("scenario")); });
  field(errs, "node_a", [&] { c.node_a = params_from(j.at("node_a"), "node_a", errs); });
  field(errs, "node_b", [&] { c.node_b = params_from(j.at("node_b"), "node_b", errs); });
  field(errs, "jones_a", [&] {
    if (j.contains("jones_a")) c.jones_a.m = matrix_from(j.at("jones_a"));
  });
  field(errs, "jones_b", [&] {
    if (j.contains("jones_b")) c.jones_b.m = matrix_from(j.at("jones_b"));
  });
  field(errs, "pattern", [&] {
    c.pattern = pattern_from(j.value("pattern", std::string("cc")));
  });
  field(errs, "resolution", [&] { c.resolution = j.value("resolution", std::size_t{256}); });
  field(errs, "ode_min_samples",
        [&] { c.ode_min_samples = j.value("ode_min_samples", std::size_t{4096}); });
  field(errs, "decay_tail", [&] { c.decay_tail = j.value("decay_tail", 6.0); });
  field(errs, "thresholds", [&] {
    if (j.contains("thresholds")) c.thresholds = j.at("thresholds").get<std::vector<double>>();
  });
  field(errs, "omega_b_values", [&] {
    if (j.contains("omega_b_values"))
      c.omega_b_values = j.at("omega_b_values").get<std::vector<double>>();
  });
  field(errs, "sweep_delta_b", [&] {
    if (j.contains("sweep_delta_b"))
      c.sweep_delta_b = j.at("sweep_delta_b").get<std::vector<double>>();
  });
  field(errs, "branching_ratio", [&] {
    if (j.contains("branching_ratio")) c.branching_ratio = j.at("branching_ratio").get<double>();
  });
  field(errs, "corrections_both_nodes",
        [&] { c.corrections_both_nodes = j.value("corrections_both_nodes", false); });
  field(errs, "output_dir",
        [&] { c.output_dir = j.value("output_dir", std::string("out")); });
  if (errs.empty()) {
    field(errs, "config", [&] { validate(c); });
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
  return config_from_json(j);
}

inline void save_config(const ScenarioConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << to_json(c).dump(2) << "\n";
}

/// FNV-1a hash of the canonical JSON form, used to stamp outputs.
inline std::string scenario_hash(const ScenarioConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace cavbell
