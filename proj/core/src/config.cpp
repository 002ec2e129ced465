#include "dimersync/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dimersync/error.hpp"

namespace dimersync {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" +
                      std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_auto(std::string_view key, std::string_view text) {
  if (trim(text) == "auto") return std::nullopt;
  return parse_double(key, text);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string("auto");
}

}  // namespace

const char* to_string(SweepParam p) {
  switch (p) {
    case SweepParam::delta: return "delta";
    case SweepParam::lambda: return "lambda";
    case SweepParam::gamma_ratio: return "gamma_ratio";
    case SweepParam::loss_ratio: return "loss_ratio";
    case SweepParam::n_spins: return "n_spins";
  }
  return "";
}

double Axis::value(int i) const {
  if (steps < 2) throw ConfigError("axis needs at least 2 steps");
  if (i == steps - 1) return max;
  return min + (max - min) * static_cast<double>(i) / (steps - 1);
}

Axis Axis::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) {
    throw ConfigError("axis must read name:min:max:steps, got '" +
                      std::string(text) + "'");
  }
  Axis a;
  const std::pair<std::string_view, SweepParam> names[] = {
      {"delta", SweepParam::delta},
      {"lambda", SweepParam::lambda},
      {"gamma_ratio", SweepParam::gamma_ratio},
      {"loss_ratio", SweepParam::loss_ratio},
      {"n_spins", SweepParam::n_spins}};
  const auto it = std::find_if(std::begin(names), std::end(names),
                               [&](const auto& n) { return n.first == parts[0]; });
  if (it == std::end(names)) {
    throw ConfigError("unknown axis parameter '" + std::string(parts[0]) + "'");
  }
  a.param = it->second;
  a.min = parse_double("axis", parts[1]);
  a.max = parse_double("axis", parts[2]);
  a.steps = parse_int("axis", parts[3]);
  if (a.steps < 2) throw ConfigError("axis needs at least 2 steps");
  return a;
}

std::string Axis::str() const {
  return std::string(to_string(param)) + ":" + fmt(min) + ":" + fmt(max) + ":" +
         std::to_string(steps);
}

void SweepConfig::validate() const {
  if (axes.size() > 2) throw ConfigError("at most two sweep axes are supported");
  std::set<SweepParam> seen;
  for (const auto& a : axes) {
    if (a.steps < 2) throw ConfigError("axis needs at least 2 steps");
    if (!seen.insert(a.param).second) {
      throw ConfigError(std::string("axis parameter repeated: ") + to_string(a.param));
    }
    if (a.param == SweepParam::gamma_ratio && gamma1) {
      throw ConfigError("gamma_ratio axis conflicts with explicit gamma1");
    }
  }
  if (!(window > 0.0)) throw ConfigError("window must be positive");
  if (!(eval_time >= 0.0)) throw ConfigError("evaluation time must be non-negative");
  if (tau_max && *tau_max < 0.0) throw ConfigError("tau_max must be non-negative");
  if (dt_sample && !(*dt_sample > 0.0)) throw ConfigError("dt_sample must be positive");
  if (loss_ratio && !(*loss_ratio > 0.0)) throw ConfigError("loss_ratio must be positive");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (rolling_stride < 1) throw ConfigError("rolling_stride must be at least 1");
  if (nu_points < 2) throw ConfigError("nu_points must be at least 2");
  if (nu_min.has_value() != nu_max.has_value()) {
    throw ConfigError("nu_min and nu_max must be given together");
  }
  if (nu_min && !(*nu_max > *nu_min)) throw ConfigError("nu_max must exceed nu_min");
  if (pair.site < 0 || pair.other < 0) throw ConfigError("pair sites are 1-based");
  (void)base_params();
}

int SweepConfig::spins_at(const std::vector<double>& axis_values) const {
  int n = n_spins;
  for (std::size_t i = 0; i < axis_values.size() && i < axes.size(); ++i) {
    if (axes[i].param == SweepParam::n_spins) {
      n = static_cast<int>(std::lround(axis_values[i]));
    }
  }
  return n;
}

ChainParams SweepConfig::params_at(const std::vector<double>& axis_values) const {
  if (!axis_values.empty() && axis_values.size() != axes.size()) {
    throw DimensionError("axis value count does not match the axes");
  }
  double d = delta, lam = lambda, ratio = gamma_ratio;
  std::optional<double> loss = loss_ratio;
  for (std::size_t i = 0; i < axis_values.size(); ++i) {
    switch (axes[i].param) {
      case SweepParam::delta: d = axis_values[i]; break;
      case SweepParam::lambda: lam = axis_values[i]; break;
      case SweepParam::gamma_ratio: ratio = axis_values[i]; break;
      case SweepParam::loss_ratio: loss = axis_values[i]; break;
      case SweepParam::n_spins: break;
    }
  }
  const double omega2 = omega1 - d;
  const double g1 = gamma1 ? *gamma1 : ratio * omega1;
  double g2 = ratio * omega2;
  if (gamma2) g2 = *gamma2;
  if (loss) {
    if (!(*loss > 0.0)) throw ConfigError("loss_ratio must be positive");
    g2 = g1 / *loss;
  }
  return {spins_at(axis_values), omega1, omega2, lam, g1, g2};
}

double SweepConfig::eval_time_for(const ChainParams& params) const {
  if (eval_unit == EvalUnit::omega1) return eval_time;
  if (!(params.gamma1() > 0.0)) {
    throw ConfigError("gamma1_times needs gamma1 > 0");
  }
  return eval_time / params.gamma1();
}

std::size_t SweepConfig::grid_size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.steps);
  return n;
}

std::vector<double> SweepConfig::cell_values(std::size_t index) const {
  std::vector<double> v(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto steps = static_cast<std::size_t>(axes[k].steps);
    v[k] = axes[k].value(static_cast<int>(index % steps));
    index /= steps;
  }
  return v;
}

std::string SweepConfig::canonical() const {
  std::ostringstream os;
  os << "n_spins=" << n_spins << "\nomega1=" << fmt(omega1)
     << "\ndelta=" << fmt(delta) << "\nlambda=" << fmt(lambda)
     << "\ngamma_ratio=" << fmt(gamma_ratio) << "\ngamma1=" << fmt(gamma1)
     << "\ngamma2=" << fmt(gamma2) << "\nloss_ratio=" << fmt(loss_ratio)
     << "\ninitial_state=" << initial_state << "\neval_time=" << fmt(eval_time)
     << "\neval_unit=" << (eval_unit == EvalUnit::gamma1 ? "gamma1" : "omega1")
     << "\nwindow=" << fmt(window) << "\ntau_max=" << fmt(tau_max)
     << "\ndt_sample=" << fmt(dt_sample) << "\npath="
     << (path == EvolutionPath::automatic ? "auto"
         : path == EvolutionPath::analytic ? "analytic"
                                           : "ode");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    os << "\naxis" << i + 1 << "=" << axes[i].str();
  }
  os << "\n";
  return os.str();
}

std::uint64_t SweepConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

InitialState parse_initial_state(std::string_view descriptor, int n_spins) {
  const auto d = trim(descriptor);
  if (d == "vacuum") return InitialState::vacuum();
  if (d == "product_plus") return InitialState::product_plus();
  if (d == "uniform") return InitialState::uniform_superposition(n_spins);
  if (d.starts_with("pair:")) {
    const auto parts = split(d.substr(5), ',');
    if (parts.size() != 2) throw ConfigError("pair state needs two sites");
    return InitialState::pair_superposition(n_spins,
                                            parse_int("initial_state", parts[0]) - 1,
                                            parse_int("initial_state", parts[1]) - 1);
  }
  if (d.starts_with("amplitudes:")) {
    std::istringstream in{std::string(d.substr(11))};
    std::vector<cplx> values;
    cplx c;
    while (in >> c) values.push_back(c);
    if (!in.eof()) throw ConfigError("malformed amplitude list in initial_state");
    if (values.size() != static_cast<std::size_t>(n_spins) + 1) {
      throw ConfigError("amplitude list needs c0 plus one entry per spin");
    }
    const cplx c0 = values.front();
    values.erase(values.begin());
    return InitialState::one_excitation(c0, std::move(values));
  }
  throw ConfigError("unknown initial_state '" + std::string(d) + "'");
}

void apply_setting(SweepConfig& c, std::string_view key, std::string_view raw) {
  const auto value = trim(raw);
  if (key == "n_spins") {
    c.n_spins = parse_int(key, value);
  } else if (key == "omega1") {
    c.omega1 = parse_double(key, value);
  } else if (key == "delta") {
    c.delta = parse_double(key, value);
  } else if (key == "omega2") {
    c.delta = c.omega1 - parse_double(key, value);
  } else if (key == "lambda") {
    c.lambda = parse_double(key, value);
  } else if (key == "gamma_ratio") {
    c.gamma_ratio = parse_double(key, value);
  } else if (key == "gamma1") {
    c.gamma1 = parse_double(key, value);
  } else if (key == "gamma2") {
    c.gamma2 = parse_double(key, value);
  } else if (key == "loss_ratio") {
    c.loss_ratio = parse_double(key, value);
  } else if (key == "initial_state") {
    c.initial_state = std::string(value);
  } else if (key == "gamma1_times") {
    c.eval_time = parse_double(key, value);
    c.eval_unit = EvalUnit::gamma1;
  } else if (key == "eval_time") {
    c.eval_time = parse_double(key, value);
    c.eval_unit = EvalUnit::omega1;
  } else if (key == "window") {
    c.window = parse_double(key, value);
  } else if (key == "tau_max") {
    c.tau_max = parse_auto(key, value);
  } else if (key == "dt_sample") {
    c.dt_sample = parse_auto(key, value);
  } else if (key == "t_end") {
    c.t_end = parse_auto(key, value);
  } else if (key == "rolling_stride") {
    const int s = parse_int(key, value);
    if (s < 1) throw ConfigError("rolling_stride must be at least 1");
    c.rolling_stride = static_cast<std::size_t>(s);
  } else if (key == "axis1" || key == "axis2") {
    const std::size_t slot = key == "axis1" ? 0 : 1;
    if (c.axes.size() <= slot) c.axes.resize(slot + 1);
    c.axes[slot] = Axis::parse(value);
  } else if (key == "pair") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw ConfigError("pair must read j,k");
    c.pair = {parse_int(key, parts[0]) - 1, parse_int(key, parts[1]) - 1};
  } else if (key == "path") {
    if (value == "auto") c.path = EvolutionPath::automatic;
    else if (value == "analytic") c.path = EvolutionPath::analytic;
    else if (value == "ode") c.path = EvolutionPath::ode;
    else throw ConfigError("path must be auto, analytic or ode");
  } else if (key == "workers") {
    c.workers = parse_int(key, value);
  } else if (key == "nu_points") {
    c.nu_points = parse_int(key, value);
  } else if (key == "nu_min") {
    c.nu_min = parse_double(key, value);
  } else if (key == "nu_max") {
    c.nu_max = parse_double(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

SweepConfig parse_config(std::istream& in) {
  SweepConfig c;
  std::string line;
  int number = 0;
  std::set<std::string> seen;
  std::optional<std::string> deferred_omega2;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key(trim(view.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" +
                        key + "'");
    }
    if (key == "omega2") {
      // Resolved after omega1 regardless of line order.
      deferred_omega2 = std::string(view.substr(eq + 1));
      continue;
    }
    try {
      apply_setting(c, key, view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (seen.contains("axis2") && !seen.contains("axis1")) {
    throw ConfigError("axis2 given without axis1");
  }
  if (seen.contains("omega2") && seen.contains("delta")) {
    throw ConfigError("give either delta or omega2, not both");
  }
  if (deferred_omega2) apply_setting(c, "omega2", *deferred_omega2);
  c.validate();
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

}  // namespace dimersync
