#include "dimersync/sync_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dimersync/dynamics.hpp"
#include "dimersync/error.hpp"

namespace dimersync {

namespace {

constexpr double kGridSlack = 1e-9;

struct SampleRange {
  std::size_t first;
  std::size_t count;
};

// Sample indices of [start, start + length] on the grid.
SampleRange window_samples(const TimeGrid& grid, Window w) {
  if (!(grid.step > 0.0)) throw ConfigError("series time step must be positive");
  if (!(w.length > 0.0)) throw ConfigError("window length must be positive");
  const double offset = (w.start - grid.start) / grid.step;
  if (offset < -kGridSlack) {
    throw ConfigError("window starts before the series");
  }
  const auto first = static_cast<std::size_t>(std::llround(std::max(0.0, offset)));
  const auto count =
      static_cast<std::size_t>(std::llround(w.length / grid.step)) + 1;
  if (count < kMinWindowSamples) {
    std::ostringstream os;
    os << "window of length " << w.length << " holds only " << count
       << " samples (need " << kMinWindowSamples << ")";
    throw ConfigError(os.str());
  }
  return {first, count};
}

std::size_t delay_steps(const TimeGrid& grid, double tau_max) {
  if (tau_max < 0.0) throw ConfigError("tau_max must be non-negative");
  return static_cast<std::size_t>(std::floor(tau_max / grid.step + kGridSlack));
}

}  // namespace

PearsonValue pearson_samples(std::span<const double> x1,
                             std::span<const double> x2) {
  if (x1.size() != x2.size()) throw DimensionError("Pearson inputs differ in length");
  const std::size_t n = x1.size();
  if (n < 2) throw ConfigError("Pearson window needs at least two samples");
  auto weight = [n](std::size_t i) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
  };
  const double total = static_cast<double>(n - 1);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += weight(i) * x1[i];
    m2 += weight(i) * x2[i];
  }
  m1 /= total;
  m2 /= total;
  double v1 = 0.0, v2 = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = x1[i] - m1;
    const double d2 = x2[i] - m2;
    v1 += weight(i) * d1 * d1;
    v2 += weight(i) * d2 * d2;
    cov += weight(i) * d1 * d2;
  }
  v1 /= total;
  v2 /= total;
  cov /= total;
  if (v1 < kVarianceFloor || v2 < kVarianceFloor) return {0.0, false};
  return {std::clamp(cov / std::sqrt(v1 * v2), -1.0, 1.0), true};
}

PearsonValue pearson(std::span<const double> x1, std::span<const double> x2,
                     const TimeGrid& grid, Window window) {
  if (x1.size() != grid.count || x2.size() != grid.count) {
    throw DimensionError("series length does not match the time grid");
  }
  const SampleRange r = window_samples(grid, window);
  if (r.first + r.count > grid.count) {
    throw ConfigError("window extends past the end of the series");
  }
  return pearson_samples(x1.subspan(r.first, r.count),
                         x2.subspan(r.first, r.count));
}

SyncReport pearson_max_delay(std::span<const double> x1,
                             std::span<const double> x2, const TimeGrid& grid,
                             Window window, double tau_max) {
  if (x1.size() != grid.count || x2.size() != grid.count) {
    throw DimensionError("series length does not match the time grid");
  }
  const SampleRange r = window_samples(grid, window);
  const std::size_t shifts = delay_steps(grid, tau_max);
  if (r.first + r.count + shifts > grid.count) {
    throw ConfigError("series does not cover the window plus the delay range");
  }
  const auto a = x1.subspan(r.first, r.count);
  SyncReport report;
  report.window = window;
  bool any = false;
  for (std::size_t s = 0; s <= shifts; ++s) {
    const PearsonValue p = pearson_samples(a, x2.subspan(r.first + s, r.count));
    if (s == 0) report.c_value = p.value;
    if (p.defined && (!any || p.value > report.c_max_delay)) {
      report.c_max_delay = p.value;
      report.tau_star = static_cast<double>(s) * grid.step;
      any = true;
    }
  }
  report.defined = any;
  if (!any) {
    report.c_max_delay = 0.0;
    report.tau_star = 0.0;
  }
  return report;
}

GlobalSync global_sync(const Eigen::MatrixXd& coherences, const TimeGrid& grid,
                       Window window, double tau_max) {
  const auto n = static_cast<int>(coherences.rows());
  if (n < 2) throw ConfigError("global synchronization needs at least two series");
  if (static_cast<std::size_t>(coherences.cols()) != grid.count) {
    throw DimensionError("coherence samples do not match the time grid");
  }
  // Row-major copies give contiguous spans per site.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    rows[static_cast<std::size_t>(j)].resize(grid.count);
    Eigen::Map<Eigen::VectorXd>(rows[static_cast<std::size_t>(j)].data(),
                                coherences.cols()) = coherences.row(j);
  }
  GlobalSync g;
  g.window = window;
  g.tau_max = tau_max;
  g.pair_matrix = Eigen::MatrixXd::Identity(n, n);
  g.c_t = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      SyncReport r = pearson_max_delay(rows[static_cast<std::size_t>(i)],
                                       rows[static_cast<std::size_t>(j)], grid,
                                       window, tau_max);
      r.i = i;
      r.j = j;
      if (!r.defined) ++g.undefined_pairs;
      g.pair_matrix(i, j) = g.pair_matrix(j, i) = r.c_max_delay;
      g.c_t *= r.c_max_delay;
      g.pairs.push_back(r);
    }
  }
  return g;
}

GlobalSync global_sync(const Trajectory& trajectory, int n_spins,
                       Window window, double tau_max) {
  const TimeGrid& grid = trajectory.grid();
  Eigen::MatrixXd x(n_spins, static_cast<Eigen::Index>(grid.count));
  for (int j = 0; j < n_spins; ++j) {
    const auto s = trajectory.series(Observable::sigma_x(j).label());
    x.row(j) = Eigen::Map<const Eigen::VectorXd>(s.data(),
                                                 static_cast<Eigen::Index>(s.size()))
                   .transpose();
  }
  return global_sync(x, grid, window, tau_max);
}

}  // namespace dimersync
