#pragma once

// Parameter sweeps and single-point runs behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dimersync/config.hpp"
#include "dimersync/one_excitation.hpp"
#include "dimersync/spectrum.hpp"
#include "dimersync/sync_metrics.hpp"
#include "dimersync/trajectory.hpp"

namespace dimersync {

[[nodiscard]] const char* version();

/// Delay search range: one period 2 pi / |nu_1| of the slowest mode, or the
/// window when nu_1 vanishes.
[[nodiscard]] double default_tau_max(const SpectrumReport& report,
                                     double window);

/// Synchronization of a single parameter point at the configured time.
struct PointSync {
  GlobalSync sync;
  SpectrumReport spectrum;
  double eval_time = 0.0;
  double tau_max = 0.0;
  double dt_sample = 0.0;
  bool analytic = false;
};

/// Evolves `params` (analytic path when allowed and the initial state is a
/// one-excitation superposition, full master equation otherwise) and
/// evaluates C_T over [eval_time, eval_time + window].
[[nodiscard]] PointSync evaluate_point(const SweepConfig& config,
                                       const ChainParams& params);

struct MapCell {
  std::vector<double> coords;
  double c_t = 0.0;
  double ratio_21 = 0.0;
  double ratio_23 = 0.0;
  double slow_gap = 0.0;
  double condition = 0.0;
  double tau_max = 0.0;
  int undefined_pairs = 0;
  bool flagged = false;
  std::string flag;  // error message when flagged
};

struct MapResult {
  std::vector<Axis> axes;
  std::vector<MapCell> cells;  // grid order, last axis fastest
  std::uint64_t config_hash = 0;
  std::string version;
  std::size_t cells_computed = 0;  // cells not restored from the journal

  [[nodiscard]] std::size_t flagged_count() const;
};

struct SweepOptions {
  int workers = 1;
  /// Append-only record of finished cells; cells already present with the
  /// same config hash are restored instead of recomputed.
  std::optional<std::filesystem::path> journal;
  /// Stop (without error) once this many cells were computed in this run.
  std::optional<std::size_t> max_new_cells;
};

/// Evaluates every grid cell. Per-cell failures become flagged cells.
[[nodiscard]] MapResult run_sync_map(const SweepConfig& config,
                                     const SweepOptions& options = {});

struct TrajectoryRun {
  Trajectory coherences;  // t, sx_1..sx_N, sxsx_j_k for the configured pair
  Trajectory sync;        // window start t, C_i_j for i<j, C_T
  double tau_max = 0.0;
};

/// Coherences over [0, t_end] and rolling pair/global synchronization.
[[nodiscard]] TrajectoryRun run_trajectory(const SweepConfig& config);

[[nodiscard]] SpectrumReport run_spectrum(const SweepConfig& config);

[[nodiscard]] LorentzianSpectrum run_correlation_spectrum(
    const SweepConfig& config);

}  // namespace dimersync
