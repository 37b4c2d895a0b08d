#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavbell/config_io.hpp"
#include "cavbell/scenario.hpp"

namespace cavbell {

namespace out_detail {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return std::string(buf);
}

inline std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return std::string(buf);
}

inline std::string fmt_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

inline std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: newline-stable output
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

// viridis, 9 control points
inline std::array<double, 3> colormap(double u) {
  static const double pts[9][3] = {
      {0.267004, 0.004874, 0.329415}, {0.282623, 0.140926, 0.457517},
      {0.253935, 0.265254, 0.529983}, {0.206756, 0.371758, 0.553117},
      {0.163625, 0.471133, 0.558148}, {0.127568, 0.566949, 0.550556},
      {0.134692, 0.658636, 0.517649}, {0.477504, 0.821444, 0.318195},
      {0.993248, 0.906157, 0.143936}};
  if (!(u >= 0.0)) u = 0.0;
  if (u > 1.0) u = 1.0;
  const double x = u * 8.0;
  const int i = std::min(7, static_cast<int>(x));
  const double f = x - i;
  return {pts[i][0] + f * (pts[i + 1][0] - pts[i][0]),
          pts[i][1] + f * (pts[i + 1][1] - pts[i][1]),
          pts[i][2] + f * (pts[i + 1][2] - pts[i][2])};
}

inline std::string rgb(const std::array<double, 3>& c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255.0 * c[0] + 0.5),
                static_cast<int>(255.0 * c[1] + 0.5), static_cast<int>(255.0 * c[2] + 0.5));
  return std::string(buf);
}

}  // namespace out_detail

// ---------------------------------------------------------------- CSV ----

inline void write_landscape_csv(const HeraldLandscape& ls, const std::string& path) {
  using out_detail::fmt;
  auto out = out_detail::open_out(path);
  out << "# cavbell landscape v1\n";
  if (!ls.empty()) {
    out << "# pattern=" << cfg_detail::pattern_name(ls.pattern)
        << " bell_sign=" << ls.bell_sign << "\n";
    out << "# axis_t0=" << out_detail::fmt_exact(ls.axis.t0)
        << " axis_t1=" << out_detail::fmt_exact(ls.axis.t1) << " axis_n=" << ls.axis.n
        << "\n";
    out << "# success_total=" << out_detail::fmt_exact(ls.success_total) << "\n";
  }
  out << "t_h,t_v,f_raw,f_corr,density,corr_angle,corr_azimuth\n";
  if (ls.empty()) return;
  for (std::size_t ih = 0; ih < ls.axis.n; ++ih) {
    for (std::size_t iv = 0; iv < ls.axis.n; ++iv) {
      const std::size_t k = ls.index(ih, iv);
      out << fmt(ls.axis.time(ih)) << ',' << fmt(ls.axis.time(iv)) << ','
          << fmt(ls.f_raw[k]) << ',' << fmt(ls.f_corr[k]) << ',' << fmt(ls.density[k])
          << ',' << fmt(ls.corr_angle[k]) << ',' << fmt(ls.corr_azimuth[k]) << "\n";
    }
  }
}

inline HeraldLandscape read_landscape_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open landscape file: " + path);
  HeraldLandscape ls;
  std::string line;
  double t0 = 0.0, t1 = 0.0, success = 0.0;
  std::size_t n = 0;
  std::string pattern = "cc";
  int bell_sign = 1;
  std::vector<std::array<double, 7>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "axis_t0") t0 = std::stod(val);
        if (key == "axis_t1") t1 = std::stod(val);
        if (key == "axis_n") n = std::stoul(val);
        if (key == "success_total") success = std::stod(val);
        if (key == "pattern") pattern = val;
        if (key == "bell_sign") bell_sign = std::stoi(val);
      }
      continue;
    }
    if (line.rfind("t_h,", 0) == 0) continue;  // header
    std::array<double, 7> row{};
    std::istringstream ss(line);
    std::string cell;
    for (int c = 0; c < 7; ++c) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short row in " + path);
      row[c] = std::strtod(cell.c_str(), nullptr);
    }
    rows.push_back(row);
  }
  if (n == 0 || rows.size() != n * n)
    throw std::runtime_error("landscape file is empty or inconsistent: " + path);
  ls.axis = TimeGrid(t0, t1, n);
  ls.pattern = cfg_detail::pattern_from(pattern);
  ls.bell_sign = bell_sign;
  ls.success_total = success;
  ls.f_raw.resize(n * n);
  ls.f_corr.resize(n * n);
  ls.density.resize(n * n);
  ls.corr_angle.resize(n * n);
  ls.corr_azimuth.resize(n * n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ls.f_raw[k] = rows[k][2];
    ls.f_corr[k] = rows[k][3];
    ls.density[k] = rows[k][4];
    ls.corr_angle[k] = rows[k][5];
    ls.corr_azimuth[k] = rows[k][6];
  }
  return ls;
}

inline void write_tradeoff_csv(const TradeoffCurve& c, const std::string& path) {
  using out_detail::fmt;
  auto out = out_detail::open_out(path);
  out << "# cavbell tradeoff v1\n";
  out << "# total_success=" << out_detail::fmt_exact(c.total) << "\n";
  for (std::size_t j = 0; j < c.avg_thresholds.size(); ++j) {
    out << "# retained_at_avg_" << out_detail::fmt_g(c.avg_thresholds[j]) << "="
        << out_detail::fmt_exact(c.retained_at_avg[j]) << "\n";
  }
  out << "min_fidelity,retained_success_probability\n";
  for (std::size_t i = 0; i < c.threshold.size(); ++i)
    out << fmt(c.threshold[i]) << ',' << fmt(c.retained[i]) << "\n";
}

inline void write_sweep_csv(const SweepResult& s, const std::string& path) {
  using out_detail::fmt;
  auto out = out_detail::open_out(path);
  out << "# cavbell sweep v1\n";
  out << "delta_b,f_avg_raw,f_avg_corrected,success_probability\n";
  for (std::size_t i = 0; i < s.delta_b.size(); ++i)
    out << fmt(s.delta_b[i]) << ',' << fmt(s.f_avg_raw[i]) << ','
        << fmt(s.f_avg_corrected[i]) << ',' << fmt(s.success_prob[i]) << "\n";
}

inline void write_trajectory_csv(const AmplitudeTrajectory& traj, const std::string& path) {
  using out_detail::fmt;
  auto out = out_detail::open_out(path);
  static const char* names[6] = {"g0", "e0", "upH", "upV", "downH", "downV"};
  out << "time";
  for (const char* s : names) out << ",re_" << s << ",im_" << s;
  out << "\n";
  for (std::size_t i = 0; i < traj.grid.n; ++i) {
    out << fmt(traj.grid.time(i));
    for (int k = 0; k < 6; ++k)
      out << ',' << fmt(traj.states[i](k).real()) << ',' << fmt(traj.states[i](k).imag());
    out << "\n";
  }
}

inline void write_emission_csv(const EmissionRecord& rec, const std::string& path) {
  using out_detail::fmt;
  auto out = out_detail::open_out(path);
  static const char* names[2][2] = {{"HH", "HV"}, {"VH", "VV"}};
  out << "time";
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) out << ",re_w" << names[x][y] << ",im_w" << names[x][y];
  out << "\n";
  for (std::size_t i = 0; i < rec.grid.n; ++i) {
    out << fmt(rec.grid.time(i));
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        out << ',' << fmt(rec.w[x][y][i].real()) << ',' << fmt(rec.w[x][y][i].imag());
    out << "\n";
  }
}

// ---------------------------------------------------------------- SVG ----

/// Heatmap of one landscape field with a linear color scale and colorbar.
inline void write_svg_heatmap(const HeraldLandscape& ls, const std::vector<double>& field,
                              const std::string& title, const std::string& path,
                              double vmin = 0.0, double vmax = -1.0) {
  using out_detail::fmt_g;
  if (ls.empty()) throw std::invalid_argument("write_svg_heatmap: empty landscape");
  auto out = out_detail::open_out(path);

  if (vmax < vmin) {  // autoscale
    vmin = 1e300;
    vmax = -1e300;
    for (const double v : field) {
      if (std::isnan(v)) continue;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (vmin > vmax) {
      vmin = 0.0;
      vmax = 1.0;
    }
    if (vmax == vmin) vmax = vmin + 1.0;
  }

  const std::size_t n = ls.axis.n;
  const std::size_t stride = (n + 159) / 160;
  const std::size_t m = (n + stride - 1) / stride;
  const double plot = 480.0;
  const double mleft = 64.0, mbot = 46.0, mtop = 34.0;
  const double width = mleft + plot + 86.0;
  const double height = mtop + plot + mbot;
  const double cell = plot / static_cast<double>(m);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_g(width)
      << "\" height=\"" << fmt_g(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt_g(mleft + 0.5 * plot) << "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";

  for (std::size_t ih = 0; ih < n; ih += stride) {
    for (std::size_t iv = 0; iv < n; iv += stride) {
      const double v = field[ls.index(ih, iv)];
      const std::string color =
          std::isnan(v) ? "#cccccc"
                        : out_detail::rgb(out_detail::colormap((v - vmin) / (vmax - vmin)));
      // t_h on x, t_v on y (origin bottom-left)
      const double x = mleft + cell * static_cast<double>(ih / stride);
      const double y = mtop + plot - cell * static_cast<double>(iv / stride + 1);
      out << "<rect x=\"" << fmt_g(x) << "\" y=\"" << fmt_g(y) << "\" width=\""
          << fmt_g(cell + 0.35) << "\" height=\"" << fmt_g(cell + 0.35) << "\" fill=\""
          << color << "\"/>\n";
    }
  }

  // axes
  out << "<text x=\"" << fmt_g(mleft + 0.5 * plot) << "\" y=\"" << fmt_g(height - 12.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">t_H "
         "(1/kappa)</text>\n";
  out << "<text x=\"16\" y=\"" << fmt_g(mtop + 0.5 * plot)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << fmt_g(mtop + 0.5 * plot) << ")\">t_V (1/kappa)</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double ft = static_cast<double>(tick) / 4.0;
    const double tval = ls.axis.t0 + ft * (ls.axis.t1 - ls.axis.t0);
    out << "<text x=\"" << fmt_g(mleft + ft * plot) << "\" y=\"" << fmt_g(mtop + plot + 16.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt_g(tval) << "</text>\n";
    out << "<text x=\"" << fmt_g(mleft - 6.0) << "\" y=\"" << fmt_g(mtop + plot - ft * plot + 3.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_g(tval)
        << "</text>\n";
  }

  // colorbar
  const double bx = mleft + plot + 18.0;
  const int stops = 32;
  const double bh = plot / stops;
  for (int i = 0; i < stops; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / stops;
    out << "<rect x=\"" << fmt_g(bx) << "\" y=\"" << fmt_g(mtop + plot - (i + 1) * bh)
        << "\" width=\"16\" height=\"" << fmt_g(bh + 0.35) << "\" fill=\""
        << out_detail::rgb(out_detail::colormap(u)) << "\"/>\n";
  }
  out << "<text x=\"" << fmt_g(bx + 22.0) << "\" y=\"" << fmt_g(mtop + plot)
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_g(vmin) << "</text>\n";
  out << "<text x=\"" << fmt_g(bx + 22.0) << "\" y=\"" << fmt_g(mtop + 8.0)
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_g(vmax) << "</text>\n";
  out << "</svg>\n";
}

/// Line plot of the six basis-state populations against time.
inline void write_populations_svg(const AmplitudeTrajectory& traj, const std::string& title,
                                  const std::string& path) {
  using out_detail::fmt_g;
  auto out = out_detail::open_out(path);
  static const char* names[6] = {"g,0", "e,0", "up,H", "up,V", "down,H", "down,V"};
  static const char* colors[6] = {"#444444", "#9467bd", "#1f77b4",
                                  "#17becf", "#d62728", "#ff7f0e"};
  const double mleft = 56.0, mtop = 34.0, mbot = 44.0;
  const double pw = 520.0, ph = 300.0;
  const double width = mleft + pw + 120.0, height = mtop + ph + mbot;

  double pmax = 0.0;
  for (std::size_t i = 0; i < traj.grid.n; ++i)
    for (int k = 0; k < 6; ++k) pmax = std::max(pmax, traj.population(i, k));
  if (pmax <= 0.0) pmax = 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_g(width)
      << "\" height=\"" << fmt_g(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt_g(mleft + 0.5 * pw)
      << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<rect x=\"" << fmt_g(mleft) << "\" y=\"" << fmt_g(mtop) << "\" width=\"" << fmt_g(pw)
      << "\" height=\"" << fmt_g(ph) << "\" fill=\"none\" stroke=\"#888\"/>\n";

  const std::size_t stride = std::max<std::size_t>(1, traj.grid.n / 1024);
  for (int k = 0; k < 6; ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[k] << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < traj.grid.n; i += stride) {
      const double x = mleft + pw * (traj.grid.time(i) - traj.grid.t0) / (traj.grid.t1 - traj.grid.t0);
      const double y = mtop + ph - ph * traj.population(i, k) / pmax;
      out << fmt_g(x) << ',' << fmt_g(y) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << fmt_g(mleft + pw + 12.0) << "\" y=\"" << fmt_g(mtop + 16.0 + 18.0 * k)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[k] << "\">"
        << names[k] << "</text>\n";
  }
  for (int tick = 0; tick <= 4; ++tick) {
    const double ft = tick / 4.0;
    out << "<text x=\"" << fmt_g(mleft + ft * pw) << "\" y=\"" << fmt_g(mtop + ph + 16.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt_g(traj.grid.t0 + ft * (traj.grid.t1 - traj.grid.t0)) << "</text>\n";
    out << "<text x=\"" << fmt_g(mleft - 6.0) << "\" y=\"" << fmt_g(mtop + ph - ft * ph + 3.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt_g(ft * pmax) << "</text>\n";
  }
  out << "<text x=\"" << fmt_g(mleft + 0.5 * pw) << "\" y=\"" << fmt_g(height - 10.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">time "
         "(1/kappa)</text>\n";
  out << "</svg>\n";
}

/// Line plot of a deliberate-birefringence sweep.
inline void write_sweep_svg(const SweepResult& s, const std::string& title,
                            const std::string& path) {
  using out_detail::fmt_g;
  auto out = out_detail::open_out(path);
  const double mleft = 56.0, mtop = 34.0, mbot = 44.0;
  const double pw = 520.0, ph = 300.0;
  const double width = mleft + pw + 150.0, height = mtop + ph + mbot;
  const double xmin = s.delta_b.front(), xmax = s.delta_b.back();

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_g(width)
      << "\" height=\"" << fmt_g(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt_g(mleft + 0.5 * pw)
      << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<rect x=\"" << fmt_g(mleft) << "\" y=\"" << fmt_g(mtop) << "\" width=\"" << fmt_g(pw)
      << "\" height=\"" << fmt_g(ph) << "\" fill=\"none\" stroke=\"#888\"/>\n";

  const std::vector<double>* series[3] = {&s.f_avg_raw, &s.f_avg_corrected, &s.success_prob};
  static const char* names[3] = {"raw fidelity", "corrected fidelity", "success probability"};
  static const char* colors[3] = {"#1f77b4", "#d62728", "#2ca02c"};
  for (int k = 0; k < 3; ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[k] << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < s.delta_b.size(); ++i) {
      const double x = mleft + pw * (s.delta_b[i] - xmin) / std::max(1e-12, xmax - xmin);
      const double y = mtop + ph - ph * std::clamp((*series[k])[i], 0.0, 1.0);
      out << fmt_g(x) << ',' << fmt_g(y) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << fmt_g(mleft + pw + 12.0) << "\" y=\"" << fmt_g(mtop + 16.0 + 18.0 * k)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[k] << "\">"
        << names[k] << "</text>\n";
  }
  for (int tick = 0; tick <= 4; ++tick) {
    const double ft = tick / 4.0;
    out << "<text x=\"" << fmt_g(mleft + ft * pw) << "\" y=\"" << fmt_g(mtop + ph + 16.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt_g(xmin + ft * (xmax - xmin)) << "</text>\n";
    out << "<text x=\"" << fmt_g(mleft - 6.0) << "\" y=\"" << fmt_g(mtop + ph - ft * ph + 3.0)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_g(ft)
        << "</text>\n";
  }
  out << "<text x=\"" << fmt_g(mleft + 0.5 * pw) << "\" y=\"" << fmt_g(height - 10.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">delta_B "
         "(kappa)</text>\n";
  out << "</svg>\n";
}

// --------------------------------------------------------------- JSON ----

inline nlohmann::json run_summary_json(const RunResult& r) {
  nlohmann::json j;
  j["name"] = r.config.name;
  j["scenario_hash"] = scenario_hash(r.config);
  j["omega_b"] = r.config.node_b.birefringence.omega_b;
  j["delta_b"] = r.config.node_b.birefringence.delta_b;
  j["f_avg_raw"] = r.f_avg_raw;
  j["f_avg_corrected"] = r.f_avg_corrected;
  j["success_total"] = r.landscape.success_total;
  j["emission_prob_node1"] = r.emission_prob_a;
  j["emission_prob_node2"] = r.emission_prob_b;
  j["photon_duration_node1"] = r.photon_duration_a;
  nlohmann::json raw = nlohmann::json::object();
  nlohmann::json corr = nlohmann::json::object();
  for (std::size_t i = 0; i < r.config.thresholds.size(); ++i) {
    const std::string key = out_detail::fmt_g(r.config.thresholds[i]);
    raw[key] = r.tradeoff_raw.retained_at_avg[i];
    corr[key] = r.tradeoff_corrected.retained_at_avg[i];
  }
  j["retained_at_avg_threshold"] = {{"raw", raw}, {"corrected", corr}};
  return j;
}

/// Everything `run` produces for one landscape: CSVs plus the five panels.
inline void write_outputs(const RunResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_landscape_csv(r.landscape, dir + "/landscape.csv");
  write_tradeoff_csv(r.tradeoff_raw, dir + "/tradeoff_raw.csv");
  write_tradeoff_csv(r.tradeoff_corrected, dir + "/tradeoff_corrected.csv");
  write_trajectory_csv(r.traj_b, dir + "/populations_node2.csv");
  write_emission_csv(r.rec_a, dir + "/emission_node1.csv");
  write_emission_csv(r.rec_b, dir + "/emission_node2.csv");
  if (!r.landscape.empty()) {
    write_populations_svg(r.traj_b, "populations (birefringent node)", dir + "/populations.svg");
    write_svg_heatmap(r.landscape, r.landscape.f_raw, "raw fidelity", dir + "/f_raw.svg", 0.0, 1.0);
    write_svg_heatmap(r.landscape, r.landscape.f_corr, "corrected fidelity", dir + "/f_corr.svg",
                      0.0, 1.0);
    write_svg_heatmap(r.landscape, r.landscape.density, "detection probability density",
                      dir + "/density.svg");
    write_svg_heatmap(r.landscape, r.landscape.corr_angle, "correction rotation angle",
                      dir + "/correction.svg", 0.0, M_PI);
  }
}

}  // namespace cavbell
