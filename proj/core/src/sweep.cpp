#include "dimersync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "dimersync/dynamics.hpp"
#include "dimersync/error.hpp"

#ifndef DIMERSYNC_VERSION
#define DIMERSYNC_VERSION "0.0.0"
#endif

namespace dimersync {

const char* version() { return DIMERSYNC_VERSION; }

namespace {

constexpr double kGridSlack = 1e-9;

double sample_step(const SweepConfig& config, const ChainParams& params) {
  return config.dt_sample ? *config.dt_sample : default_sample_step(params);
}

std::size_t steps_in(double span, double dt) {
  return static_cast<std::size_t>(std::floor(span / dt + kGridSlack));
}

// Matches the window sampling of the Pearson routines.
std::size_t window_steps(double window, double dt) {
  return static_cast<std::size_t>(std::llround(window / dt));
}

// Resolves the evolution path; returns the amplitudes when analytic.
std::optional<OneExcitationAmplitudes> analytic_amplitudes(
    const SweepConfig& config, const InitialState& init, int n_spins) {
  if (config.path == EvolutionPath::ode) return std::nullopt;
  auto amps = init.one_excitation_amplitudes(n_spins);
  if (!amps && config.path == EvolutionPath::analytic) {
    throw ConfigError("analytic path requested for a state outside the "
                      "one-excitation sector");
  }
  return amps;
}

// Rows: sites, columns: grid samples.
Eigen::MatrixXd ode_coherences(const ChainParams& params,
                               const InitialState& init, const TimeGrid& grid) {
  const int n = params.n_spins();
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(grid.count));
  Eigen::Index column = 0;
  propagate(params, init.density_matrix(n).matrix(), grid, IntegratorOptions{},
            [&](double, const Matrix& rho) {
              for (int j = 0; j < n; ++j) {
                x(j, column) = 2.0 * lowering_expectation(rho, j).real();
              }
              ++column;
            });
  return x;
}

Eigen::MatrixXd sample_coherences(const SweepConfig& config,
                                  const ChainParams& params,
                                  const std::vector<EigenMode>* modes,
                                  const TimeGrid& grid, bool& analytic) {
  const InitialState init =
      parse_initial_state(config.initial_state, params.n_spins());
  const auto amps = analytic_amplitudes(config, init, params.n_spins());
  analytic = amps.has_value();
  if (!amps) return ode_coherences(params, init, grid);
  std::vector<EigenMode> own;
  if (modes == nullptr) {
    own = analytic_spectrum(params).modes;
    modes = &own;
  }
  return CoherenceExpansion(*modes, amps->vacuum, amps->sites)
      .sample_coherences(grid);
}

std::string journal_line(std::uint64_t hash, std::size_t index,
                         const MapCell& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%016" PRIx64 " %zu %.17g %.17g %.17g %.17g %.17g %.17g %d %d ",
                hash, index, c.c_t, c.ratio_21, c.ratio_23, c.slow_gap,
                c.condition, c.tau_max, c.undefined_pairs, c.flagged ? 1 : 0);
  std::string flag = c.flag;
  std::replace(flag.begin(), flag.end(), '\n', ' ');
  return buf + flag + "\n";
}

bool parse_journal_line(const std::string& line, std::uint64_t hash,
                        std::size_t grid, std::size_t& index, MapCell& c) {
  std::istringstream in(line);
  std::string h, num;
  if (!(in >> h)) return false;
  char* end = nullptr;
  if (std::strtoull(h.c_str(), &end, 16) != hash || *end != '\0') return false;
  if (!(in >> index) || index >= grid) return false;
  double* fields[] = {&c.c_t,      &c.ratio_21,  &c.ratio_23,
                      &c.slow_gap, &c.condition, &c.tau_max};
  for (double* f : fields) {
    // strtod accepts "nan", which operator>> does not.
    if (!(in >> num)) return false;
    *f = std::strtod(num.c_str(), &end);
    if (*end != '\0') return false;
  }
  int flagged = 0;
  if (!(in >> c.undefined_pairs >> flagged)) return false;
  c.flagged = flagged != 0;
  std::getline(in >> std::ws, c.flag);
  return true;
}

}  // namespace

double default_tau_max(const SpectrumReport& report, double window) {
  if (report.modes.empty()) return window;
  const double nu = std::abs(report.modes.front().frequency());
  if (nu == 0.0) return window;
  return 2.0 * std::numbers::pi / nu;
}

PointSync evaluate_point(const SweepConfig& config, const ChainParams& params) {
  PointSync out;
  out.spectrum = analytic_spectrum(params);
  out.eval_time = config.eval_time_for(params);
  out.tau_max = config.tau_max ? *config.tau_max
                               : default_tau_max(out.spectrum, config.window);
  out.dt_sample = sample_step(config, params);
  const TimeGrid grid{out.eval_time, out.dt_sample,
                      window_steps(config.window, out.dt_sample) +
                          steps_in(out.tau_max, out.dt_sample) + 1};
  const Eigen::MatrixXd x =
      sample_coherences(config, params, &out.spectrum.modes, grid, out.analytic);
  out.sync = global_sync(x, grid, {out.eval_time, config.window}, out.tau_max);
  return out;
}

std::size_t MapResult::flagged_count() const {
  return static_cast<std::size_t>(std::count_if(
      cells.begin(), cells.end(), [](const MapCell& c) { return c.flagged; }));
}

MapResult run_sync_map(const SweepConfig& config, const SweepOptions& options) {
  config.validate();
  if (options.workers < 1) throw ConfigError("workers must be at least 1");
  const std::size_t total = config.grid_size();

  MapResult result;
  result.axes = config.axes;
  result.config_hash = config.hash();
  result.version = version();
  result.cells.resize(total);

  std::vector<char> done(total, 0);
  if (options.journal && std::filesystem::exists(*options.journal)) {
    std::ifstream in(*options.journal);
    std::string line;
    while (std::getline(in, line)) {
      std::size_t index = 0;
      MapCell cell;
      if (parse_journal_line(line, result.config_hash, total, index, cell)) {
        cell.coords = config.cell_values(index);
        result.cells[index] = std::move(cell);
        done[index] = 1;
      }
    }
  }
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < total; ++i) {
    if (!done[i]) pending.push_back(i);
  }

  std::ofstream journal;
  if (options.journal) {
    journal.open(*options.journal, std::ios::app);
    if (!journal) {
      throw ConfigError("cannot open journal " + options.journal->string());
    }
  }
  std::mutex journal_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> computed{0};
  const std::size_t budget = options.max_new_cells.value_or(pending.size());

  auto work = [&] {
    while (true) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size() || slot >= budget) return;
      const std::size_t index = pending[slot];
      MapCell cell;
      cell.coords = config.cell_values(index);
      try {
        const ChainParams params = config.params_at(cell.coords);
        const PointSync p = evaluate_point(config, params);
        cell.c_t = p.sync.c_t;
        cell.undefined_pairs = p.sync.undefined_pairs;
        cell.tau_max = p.tau_max;
        const BandDiagnostics d = band_diagnostics(p.spectrum);
        cell.ratio_21 = d.ratio_21;
        cell.ratio_23 = d.ratio_23;
        cell.slow_gap = d.slow_gap;
        cell.condition = p.spectrum.max_condition;
      } catch (const Error& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cell.c_t = cell.ratio_21 = cell.ratio_23 = cell.slow_gap = nan;
        cell.condition = cell.tau_max = nan;
        cell.flagged = true;
        cell.flag = e.what();
      }
      if (journal.is_open()) {
        const std::string line = journal_line(result.config_hash, index, cell);
        const std::lock_guard lock(journal_mutex);
        journal << line << std::flush;
      }
      result.cells[index] = std::move(cell);
      computed.fetch_add(1);
    }
  };

  const auto threads =
      std::min<std::size_t>(static_cast<std::size_t>(options.workers),
                            std::max<std::size_t>(pending.size(), 1));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  result.cells_computed = computed.load();
  return result;
}

TrajectoryRun run_trajectory(const SweepConfig& config) {
  config.validate();
  if (!config.axes.empty()) {
    throw ConfigError("trajectory runs take a single parameter point (no axes)");
  }
  const ChainParams params = config.base_params();
  const int n = params.n_spins();
  const InitialState init = parse_initial_state(config.initial_state, n);
  const auto amps = analytic_amplitudes(config, init, n);

  std::optional<SpectrumReport> spectrum;
  if (amps || !config.tau_max) spectrum = analytic_spectrum(params);
  TrajectoryRun run;
  run.tau_max = config.tau_max ? *config.tau_max
                               : default_tau_max(*spectrum, config.window);
  const double dt = sample_step(config, params);
  const double t_end = config.t_end ? *config.t_end
                                    : config.eval_time_for(params) +
                                          config.window + run.tau_max;
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  const TimeGrid grid{0.0, dt, steps_in(t_end, dt) + 1};

  const SitePair pair = config.pair;
  if (pair.site >= n || pair.other >= n) {
    throw ConfigError("pair lies outside the chain");
  }
  Eigen::MatrixXd x;
  if (amps) {
    run.coherences = coherence_evolution(params, init, grid);
    const Trajectory zz = correlator_evolution(params, init, grid, pair);
    const auto& col = zz.columns().front();
    run.coherences.add(col.first, col.second);
  } else {
    EvolveOptions opt;
    opt.t_end = grid.end();
    opt.dt_sample = dt;
    auto observables = all_coherences(n);
    observables.push_back(Observable::sigma_x_pair(pair.site, pair.other));
    run.coherences = evolve(params, init, opt, observables);
  }
  x.resize(n, static_cast<Eigen::Index>(run.coherences.size()));
  for (int j = 0; j < n; ++j) {
    const auto s = run.coherences.series(Observable::sigma_x(j).label());
    for (std::size_t i = 0; i < s.size(); ++i) {
      x(j, static_cast<Eigen::Index>(i)) = s[i];
    }
  }

  const TimeGrid& g = run.coherences.grid();
  const std::size_t span = window_steps(config.window, dt) + steps_in(run.tau_max, dt);
  if (g.count <= span) {
    throw ConfigError("t_end is shorter than one window plus the delay range");
  }
  const std::size_t starts = (g.count - 1 - span) / config.rolling_stride + 1;
  const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);
  std::vector<std::vector<double>> c(pairs + 1, std::vector<double>(starts));
  for (std::size_t s = 0; s < starts; ++s) {
    const double t0 = g.at(s * config.rolling_stride);
    const GlobalSync gs = global_sync(x, g, {t0, config.window}, run.tau_max);
    for (std::size_t p = 0; p < pairs; ++p) c[p][s] = gs.pairs[p].c_max_delay;
    c[pairs][s] = gs.c_t;
  }
  run.sync = Trajectory(TimeGrid{0.0, dt * static_cast<double>(config.rolling_stride), starts});
  std::size_t p = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      run.sync.add("C_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                   std::move(c[p++]));
    }
  }
  run.sync.add("C_T", std::move(c[pairs]));
  run.sync.meta = run.coherences.meta;
  run.sync.meta.emplace_back("window", std::to_string(config.window));
  run.sync.meta.emplace_back("tau_max", std::to_string(run.tau_max));
  return run;
}

SpectrumReport run_spectrum(const SweepConfig& config) {
  config.validate();
  return analytic_spectrum(config.base_params());
}

LorentzianSpectrum run_correlation_spectrum(const SweepConfig& config) {
  config.validate();
  const ChainParams params = config.base_params();
  std::vector<double> grid;
  if (config.nu_min) {
    grid.resize(static_cast<std::size_t>(config.nu_points));
    const double step = (*config.nu_max - *config.nu_min) / (config.nu_points - 1);
    for (int i = 0; i < config.nu_points; ++i) {
      grid[static_cast<std::size_t>(i)] = *config.nu_min + step * i;
    }
  } else {
    grid = default_nu_grid(analytic_spectrum(params).modes, config.nu_points);
  }
  return correlation_spectrum(params, config.pair, std::move(grid));
}

}  // namespace dimersync
