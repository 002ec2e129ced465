// dimersync: spectra, trajectories, synchronization maps and correlation
// spectra of dissipative dimer spin chains.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dimersync/config.hpp"
#include "dimersync/error.hpp"
#include "dimersync/io.hpp"
#include "dimersync/sweep.hpp"

namespace fs = std::filesystem;
using namespace dimersync;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kPartial = 3 };

struct Common {
  std::string config;
  std::string out = ".";
  int workers = 0;
  std::string format = "csv";
  std::vector<std::string> overrides;
};

SweepConfig load(const Common& c) {
  SweepConfig cfg;
  if (!c.config.empty()) cfg = load_config(c.config);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.workers > 0) cfg.workers = c.workers;
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  std::cerr << "wrote " << path.string() << "\n";
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  fn(out);
  std::cerr << "wrote " << path.string() << "\n";
}

int cmd_spectrum(const Common& c) {
  const SweepConfig cfg = load(c);
  const fs::path dir = prepare_out(c);
  const SpectrumReport report = run_spectrum(cfg);
  if (c.format == "json") {
    write_file(dir / "spectrum.json", spectrum_json(report, cfg.base_params()));
  } else {
    write_with(dir / "spectrum.csv",
               [&](std::ostream& o) { write_spectrum_csv(o, report); });
    write_file(dir / "spectrum.json", spectrum_json(report, cfg.base_params()));
  }
  if (report.ill_conditioned()) {
    std::cerr << "warning: eigenmode condition number " << report.max_condition
              << " exceeds 1e6 (near an exceptional point)\n";
  }
  return kOk;
}

int cmd_evolve(const Common& c) {
  const SweepConfig cfg = load(c);
  const fs::path dir = prepare_out(c);
  const TrajectoryRun run = run_trajectory(cfg);
  if (c.format == "json") {
    write_file(dir / "trajectory.json", trajectory_json(run.coherences));
    write_file(dir / "sync.json", trajectory_json(run.sync));
  } else {
    write_with(dir / "trajectory.csv",
               [&](std::ostream& o) { write_trajectory_csv(o, run.coherences); });
    write_file(dir / "trajectory.meta.json", trajectory_meta_json(run.coherences));
    write_with(dir / "sync.csv",
               [&](std::ostream& o) { write_trajectory_csv(o, run.sync); });
    write_file(dir / "sync.meta.json", trajectory_meta_json(run.sync));
  }
  return kOk;
}

int cmd_sync_map(const Common& c, bool fresh) {
  const SweepConfig cfg = load(c);
  const fs::path dir = prepare_out(c);
  const fs::path journal = dir / "sync_map.journal";
  if (fresh) fs::remove(journal);
  SweepOptions opt;
  opt.workers = cfg.workers;
  opt.journal = journal;
  const MapResult map = run_sync_map(cfg, opt);
  if (c.format == "json") {
    write_file(dir / "sync_map.json", map_json(map));
  } else {
    write_with(dir / "sync_map.csv",
               [&](std::ostream& o) { write_map_csv(o, map); });
  }
  std::cerr << map.cells.size() << " cells (" << map.cells_computed
            << " computed, " << map.cells.size() - map.cells_computed
            << " restored, " << map.flagged_count() << " flagged)\n";
  return map.flagged_count() > 0 ? kPartial : kOk;
}

int cmd_corr_spectrum(const Common& c) {
  const SweepConfig cfg = load(c);
  const fs::path dir = prepare_out(c);
  const LorentzianSpectrum s = run_correlation_spectrum(cfg);
  const std::string stem = "corr_spectrum_" + std::to_string(cfg.pair.site + 1) +
                           "_" + std::to_string(cfg.pair.other + 1);
  write_with(dir / (stem + ".csv"),
             [&](std::ostream& o) { write_lorentzian_csv(o, s); });
  write_file(dir / (stem + ".json"), lorentzian_json(s, cfg.base_params()));
  return kOk;
}

int cmd_bh_params(const Common& c, BoseHubbardParams bh, double u_default) {
  const fs::path dir = prepare_out(c);
  if (bh.u00 <= 0.0) bh.u00 = u_default;
  if (bh.u11 <= 0.0) bh.u11 = u_default;
  const EffectiveSpinParams eff = effective_spin_params(bh);
  const std::string text = bose_hubbard_json(bh, eff);
  std::cout << text;
  write_file(dir / "bh_params.json", text);
  if (!hierarchy_satisfied(bh)) {
    std::cerr << "warning: repulsion energies are not well above the "
                 "tunneling rates; the closed forms may be inaccurate\n";
  }
  return kOk;
}

void add_common(CLI::App* app, Common& c, bool with_workers) {
  app->add_option("--config", c.config, "Run configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--format", c.format, "Artifact format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--set", c.overrides, "Override a config key (key=value)");
  if (with_workers) {
    app->add_option("--workers", c.workers, "Worker threads")
        ->check(CLI::PositiveNumber);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient synchronization in dissipative dimer spin chains"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Common common;
  bool fresh = false;
  BoseHubbardParams bh{0.0, 0.0, 0.0, 0.0, 0.0};

  auto* spectrum = app.add_subcommand("spectrum", "Analytic two-band spectrum and eigenmodes");
  add_common(spectrum, common, false);

  auto* evolve = app.add_subcommand("evolve", "Coherence trajectories and rolling synchronization");
  add_common(evolve, common, false);

  auto* map = app.add_subcommand("sync-map", "Synchronization map over one or two axes");
  add_common(map, common, true);
  map->add_flag("--fresh", fresh, "Discard the journal of a previous run");

  auto* corr = app.add_subcommand("corr-spectrum", "Two-time correlation spectrum of a spin pair");
  add_common(corr, common, false);

  auto* bhcmd = app.add_subcommand("bh-params", "Effective spin parameters from Bose-Hubbard inputs (kHz)");
  bhcmd->add_option("--out", common.out, "Output directory")->capture_default_str();
  bhcmd->add_option("--t0", bh.t0, "Tunneling rate of band 0")->required();
  bhcmd->add_option("--t1", bh.t1, "Tunneling rate of band 1")->required();
  bhcmd->add_option("--u01", bh.u01, "Inter-band repulsion")->required();
  bhcmd->add_option("--u00", bh.u00, "Band-0 repulsion (default: u01)");
  bhcmd->add_option("--u11", bh.u11, "Band-1 repulsion (default: u01)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*spectrum) return cmd_spectrum(common);
    if (*evolve) return cmd_evolve(common);
    if (*map) return cmd_sync_map(common, fresh);
    if (*corr) return cmd_corr_spectrum(common);
    if (*bhcmd) return cmd_bh_params(common, bh, bh.u01);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
