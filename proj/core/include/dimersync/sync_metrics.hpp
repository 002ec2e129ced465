#pragma once

// Windowed Pearson correlation, delay maximization and the global product
// measure over all spin pairs.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dimersync/trajectory.hpp"

namespace dimersync {

/// Windowed variances below this are treated as a decayed-to-constant signal.
inline constexpr double kVarianceFloor = 1e-18;
inline constexpr std::size_t kMinWindowSamples = 10;

struct Window {
  double start = 0.0;
  double length = 0.0;
};

struct PearsonValue {
  double value = 0.0;  // 0 when undefined
  bool defined = false;
};

/// Trapezoid-weighted Pearson coefficient of two equally long sample runs.
[[nodiscard]] PearsonValue pearson_samples(std::span<const double> x1,
                                           std::span<const double> x2);

/// Pearson coefficient over [t, t + dt] for series sampled on `grid`.
/// Throws ConfigError when the window leaves the series or has fewer than
/// 10 samples.
[[nodiscard]] PearsonValue pearson(std::span<const double> x1,
                                   std::span<const double> x2,
                                   const TimeGrid& grid, Window window);

struct SyncReport {
  int i = 0;
  int j = 1;
  double c_value = 0.0;      // zero delay
  double c_max_delay = 0.0;  // maximized over tau in [0, tau_max]
  double tau_star = 0.0;
  Window window;
  bool defined = false;  // false when every delay hit the variance floor
};

/// Correlates x1(t) with x2(t + tau) for tau on the sampling grid in
/// [0, tau_max]. Throws ConfigError when x2 does not cover t + dt + tau_max.
[[nodiscard]] SyncReport pearson_max_delay(std::span<const double> x1,
                                           std::span<const double> x2,
                                           const TimeGrid& grid, Window window,
                                           double tau_max);

struct GlobalSync {
  double c_t = 0.0;
  Eigen::MatrixXd pair_matrix;  // symmetric, unit diagonal
  std::vector<SyncReport> pairs;  // i < j in row-major order
  Window window;
  double tau_max = 0.0;
  int undefined_pairs = 0;
  [[nodiscard]] bool flagged() const { return undefined_pairs > 0; }
};

/// Pair values from the `sx_j` series of the trajectory (j = 1..n_spins);
/// c_t is the ordered product over i < j.
[[nodiscard]] GlobalSync global_sync(const Trajectory& trajectory,
                                     int n_spins, Window window,
                                     double tau_max);

/// Same, from a row-per-site sample matrix on `grid`.
[[nodiscard]] GlobalSync global_sync(const Eigen::MatrixXd& coherences,
                                     const TimeGrid& grid, Window window,
                                     double tau_max);

}  // namespace dimersync
