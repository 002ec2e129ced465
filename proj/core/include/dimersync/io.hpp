#pragma once

// CSV (17 significant digits, header row) and JSON artifact writers.

#include <ostream>
#include <string>

#include "dimersync/model.hpp"
#include "dimersync/one_excitation.hpp"
#include "dimersync/spectrum.hpp"
#include "dimersync/sweep.hpp"
#include "dimersync/sync_metrics.hpp"
#include "dimersync/trajectory.hpp"

namespace dimersync {

/// Round-trip-safe text for a double (17 significant digits).
[[nodiscard]] std::string format_number(double v);

/// `t` column followed by one column per series.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
[[nodiscard]] std::string trajectory_meta_json(const Trajectory& traj);
/// Metadata plus every series, for `--format json`.
[[nodiscard]] std::string trajectory_json(const Trajectory& traj);

/// Axis columns, c_t, ratio_21, ratio_23, slow_gap, condition, tau_max,
/// undefined_pairs, flagged, flag.
void write_map_csv(std::ostream& out, const MapResult& map);
[[nodiscard]] std::string map_json(const MapResult& map);

[[nodiscard]] std::string spectrum_json(const SpectrumReport& report,
                                        const ChainParams& params);
void write_spectrum_csv(std::ostream& out, const SpectrumReport& report);

/// Columns nu, S, absS.
void write_lorentzian_csv(std::ostream& out, const LorentzianSpectrum& s);
/// Per-mode components (nu, gamma, v).
[[nodiscard]] std::string lorentzian_json(const LorentzianSpectrum& s,
                                          const ChainParams& params);

[[nodiscard]] std::string global_sync_json(const GlobalSync& g);

[[nodiscard]] std::string bose_hubbard_json(const BoseHubbardParams& bh,
                                            const EffectiveSpinParams& eff);

}  // namespace dimersync
