#pragma once

// Flat `key = value` run configuration shared by every CLI subcommand.
//
//   n_spins = 4
//   omega1 = 1.0
//   delta = 0.8            # or omega2 = 0.2
//   lambda = 0.05
//   gamma_ratio = 0.05     # gamma_j = ratio * omega_j
//   gamma1 = 0.05          # explicit rates override gamma_ratio
//   gamma2 = 0.0125
//   loss_ratio = 4         # gamma2 = gamma1 / loss_ratio
//   initial_state = pair:2,3
//   gamma1_times = 10      # or eval_time = 200 (units of 1/omega1)
//   window = 80
//   tau_max = auto
//   dt_sample = auto
//   axis1 = delta:0:1:50
//   axis2 = lambda:0.01:0.5:50
//   pair = 1,2
//   path = auto            # auto | analytic | ode
//   workers = 1
//
// Lines starting with `#` and trailing `# ...` comments are ignored.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dimersync/dynamics.hpp"
#include "dimersync/model.hpp"
#include "dimersync/one_excitation.hpp"

namespace dimersync {

enum class SweepParam { delta, lambda, gamma_ratio, loss_ratio, n_spins };

[[nodiscard]] const char* to_string(SweepParam p);

struct Axis {
  SweepParam param = SweepParam::delta;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  [[nodiscard]] double value(int i) const;
  /// `delta:0:1:50`; throws ConfigError.
  static Axis parse(std::string_view text);
  [[nodiscard]] std::string str() const;
};

enum class EvalUnit { gamma1, omega1 };
enum class EvolutionPath { automatic, analytic, ode };

struct SweepConfig {
  int n_spins = 4;
  double omega1 = 1.0;
  double delta = 0.8;
  double lambda = 0.05;

  double gamma_ratio = 0.05;
  std::optional<double> gamma1;
  std::optional<double> gamma2;
  std::optional<double> loss_ratio;

  std::string initial_state = "pair:2,3";

  double eval_time = 10.0;
  EvalUnit eval_unit = EvalUnit::gamma1;
  double window = 80.0;
  std::optional<double> tau_max;    // empty: 2 pi / |nu_1|
  std::optional<double> dt_sample;  // empty: default_sample_step
  std::optional<double> t_end;      // trajectory length; empty: eval + window + tau
  std::size_t rolling_stride = 1;

  std::vector<Axis> axes;
  SitePair pair{0, 1};
  EvolutionPath path = EvolutionPath::automatic;
  int workers = 1;

  int nu_points = 2001;
  std::optional<double> nu_min;
  std::optional<double> nu_max;

  /// Validates axes (distinct parameters, steps >= 2) and scalar ranges.
  void validate() const;

  /// Chain parameters with the axis values applied (one value per axis).
  [[nodiscard]] ChainParams params_at(const std::vector<double>& axis_values) const;
  [[nodiscard]] ChainParams base_params() const { return params_at({}); }
  [[nodiscard]] int spins_at(const std::vector<double>& axis_values) const;

  /// Absolute evaluation time for the given chain.
  [[nodiscard]] double eval_time_for(const ChainParams& params) const;

  [[nodiscard]] std::size_t grid_size() const;
  /// Axis values of cell `index` (last axis fastest).
  [[nodiscard]] std::vector<double> cell_values(std::size_t index) const;

  /// Normalized text covering every result-relevant key (not `workers`).
  [[nodiscard]] std::string canonical() const;
  /// FNV-1a over canonical().
  [[nodiscard]] std::uint64_t hash() const;
};

/// `vacuum`, `product_plus`, `uniform`, `pair:2,3` (1-based sites) or
/// `amplitudes:(re,im) (re,im) ...` listing c0 then c_1..c_N.
[[nodiscard]] InitialState parse_initial_state(std::string_view descriptor,
                                               int n_spins);

/// Applies one key; throws ConfigError for unknown keys or bad values.
void apply_setting(SweepConfig& config, std::string_view key,
                   std::string_view value);

[[nodiscard]] SweepConfig parse_config(std::istream& in);
[[nodiscard]] SweepConfig load_config(const std::filesystem::path& path);

}  // namespace dimersync
