#include "dimersync/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace dimersync {

using nlohmann::ordered_json;

namespace {

// NaN and infinities are not valid JSON numbers.
ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json params_json(const ChainParams& p) {
  return {{"n_spins", p.n_spins()}, {"omega1", p.omega1()},
          {"omega2", p.omega2()},   {"lambda", p.lambda()},
          {"gamma1", p.gamma1()},   {"gamma2", p.gamma2()},
          {"delta", p.delta()}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (const auto& [label, values] : traj.columns()) out << "," << label;
  out << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_number(traj.grid().at(i));
    for (const auto& column : traj.columns()) {
      out << "," << format_number(column.second[i]);
    }
    out << "\n";
  }
}

namespace {

ordered_json trajectory_meta(const Trajectory& traj) {
  ordered_json j;
  j["t_start"] = traj.grid().start;
  j["dt"] = traj.grid().step;
  j["samples"] = traj.size();
  ordered_json labels = ordered_json::array();
  for (const auto& column : traj.columns()) labels.push_back(column.first);
  j["series"] = labels;
  for (const auto& [key, value] : traj.meta) j[key] = value;
  return j;
}

}  // namespace

std::string trajectory_meta_json(const Trajectory& traj) {
  return dump(trajectory_meta(traj));
}

std::string trajectory_json(const Trajectory& traj) {
  ordered_json j = trajectory_meta(traj);
  j["t"] = traj.grid().values();
  ordered_json series;
  for (const auto& [label, values] : traj.columns()) {
    ordered_json column = ordered_json::array();
    for (double v : values) column.push_back(number(v));
    series[label] = column;
  }
  j["data"] = series;
  return dump(j);
}

void write_map_csv(std::ostream& out, const MapResult& map) {
  for (const auto& a : map.axes) out << to_string(a.param) << ",";
  out << "c_t,ratio_21,ratio_23,slow_gap,condition,tau_max,undefined_pairs,"
         "flagged,flag\n";
  for (const auto& c : map.cells) {
    for (double v : c.coords) out << format_number(v) << ",";
    out << format_number(c.c_t) << "," << format_number(c.ratio_21) << ","
        << format_number(c.ratio_23) << "," << format_number(c.slow_gap) << ","
        << format_number(c.condition) << "," << format_number(c.tau_max) << ","
        << c.undefined_pairs << "," << (c.flagged ? 1 : 0) << ","
        << csv_text(c.flag) << "\n";
  }
}

std::string map_json(const MapResult& map) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, map.config_hash);
  ordered_json j;
  j["version"] = map.version;
  j["config_hash"] = hash;
  ordered_json axes = ordered_json::array();
  for (const auto& a : map.axes) {
    axes.push_back({{"param", to_string(a.param)},
                    {"min", a.min},
                    {"max", a.max},
                    {"steps", a.steps}});
  }
  j["axes"] = axes;
  j["cells_total"] = map.cells.size();
  j["cells_flagged"] = map.flagged_count();
  ordered_json cells = ordered_json::array();
  for (const auto& c : map.cells) {
    ordered_json cell;
    cell["coords"] = c.coords;
    cell["c_t"] = number(c.c_t);
    cell["ratio_21"] = number(c.ratio_21);
    cell["ratio_23"] = number(c.ratio_23);
    cell["slow_gap"] = number(c.slow_gap);
    cell["condition"] = number(c.condition);
    cell["tau_max"] = number(c.tau_max);
    cell["undefined_pairs"] = c.undefined_pairs;
    cell["flagged"] = c.flagged;
    if (c.flagged) cell["flag"] = c.flag;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  return dump(j);
}

std::string spectrum_json(const SpectrumReport& report,
                          const ChainParams& params) {
  ordered_json j;
  j["params"] = params_json(params);
  j["ratio_21"] = report.ratio_21;
  j["ratio_23"] = report.ratio_23;
  j["slow_gap"] = band_diagnostics(report).slow_gap;
  j["max_condition"] = report.max_condition;
  j["ill_conditioned"] = report.ill_conditioned();
  ordered_json modes = ordered_json::array();
  for (const auto& m : report.modes) {
    ordered_json amps = ordered_json::array();
    for (Eigen::Index i = 0; i < m.site_amplitudes.size(); ++i) {
      amps.push_back({m.site_amplitudes(i).real(), m.site_amplitudes(i).imag()});
    }
    modes.push_back({{"band", to_string(m.band)},
                     {"l", m.momentum_index},
                     {"k", m.k},
                     {"nu", m.frequency()},
                     {"gamma", m.decay_rate()},
                     {"theta_re", m.theta.real()},
                     {"theta_im", m.theta.imag()},
                     {"amplitudes", amps}});
  }
  j["modes"] = modes;
  return dump(j);
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& report) {
  out << "band,l,k,nu,gamma,theta_re,theta_im\n";
  for (const auto& m : report.modes) {
    out << to_string(m.band) << "," << m.momentum_index << ","
        << format_number(m.k) << "," << format_number(m.frequency()) << ","
        << format_number(m.decay_rate()) << "," << format_number(m.theta.real())
        << "," << format_number(m.theta.imag()) << "\n";
  }
}

void write_lorentzian_csv(std::ostream& out, const LorentzianSpectrum& s) {
  out << "nu,S,absS\n";
  for (std::size_t i = 0; i < s.nu_grid.size(); ++i) {
    out << format_number(s.nu_grid[i]) << "," << format_number(s.values[i])
        << "," << format_number(s.abs_values[i]) << "\n";
  }
}

std::string lorentzian_json(const LorentzianSpectrum& s,
                            const ChainParams& params) {
  ordered_json j;
  j["params"] = params_json(params);
  j["pair"] = {s.pair.site + 1, s.pair.other + 1};
  j["points"] = s.nu_grid.size();
  j["peaks"] = s.count_peaks();
  ordered_json comps = ordered_json::array();
  for (const auto& c : s.components) {
    comps.push_back({{"nu", c.nu},
                     {"gamma", c.gamma},
                     {"v_re", c.weight.real()},
                     {"v_im", c.weight.imag()}});
  }
  j["components"] = comps;
  return dump(j);
}

std::string global_sync_json(const GlobalSync& g) {
  ordered_json j;
  j["c_t"] = g.c_t;
  j["window"] = {{"t_start", g.window.start}, {"length", g.window.length}};
  j["tau_max"] = g.tau_max;
  j["undefined_pairs"] = g.undefined_pairs;
  ordered_json matrix = ordered_json::array();
  for (Eigen::Index r = 0; r < g.pair_matrix.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < g.pair_matrix.cols(); ++c) {
      row.push_back(g.pair_matrix(r, c));
    }
    matrix.push_back(row);
  }
  j["pair_matrix"] = matrix;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : g.pairs) {
    pairs.push_back({{"i", p.i + 1},
                     {"j", p.j + 1},
                     {"c_value", p.c_value},
                     {"c_max_delay", p.c_max_delay},
                     {"tau_star", p.tau_star},
                     {"defined", p.defined}});
  }
  j["pairs"] = pairs;
  return dump(j);
}

std::string bose_hubbard_json(const BoseHubbardParams& bh,
                              const EffectiveSpinParams& eff) {
  ordered_json j;
  j["input"] = {{"t0", bh.t0},
                {"t1", bh.t1},
                {"u00", bh.u00},
                {"u11", bh.u11},
                {"u01", bh.u01}};
  j["lambda_eff"] = eff.lambda_eff + 0.0;
  j["h_z"] = eff.h_z + 0.0;
  j["lambda_z"] = eff.lambda_z + 0.0;
  j["hierarchy_satisfied"] = hierarchy_satisfied(bh);
  return dump(j);
}

}  // namespace dimersync
