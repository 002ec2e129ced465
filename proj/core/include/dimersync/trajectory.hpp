#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dimersync {

/// Uniform sampling grid t_i = start + i * step, i < count.
struct TimeGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  [[nodiscard]] double at(std::size_t i) const {
    return start + static_cast<double>(i) * step;
  }
  [[nodiscard]] double end() const { return count == 0 ? start : at(count - 1); }
  [[nodiscard]] std::vector<double> values() const;

  /// Grid covering [start, stop] inclusive: count = round((stop-start)/step)+1.
  static TimeGrid covering(double start, double stop, double step);
};

/// Named real time series on a shared uniform grid. Series keep insertion
/// order so CSV columns are stable.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(TimeGrid grid) : grid_(grid) {}

  [[nodiscard]] const TimeGrid& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return grid_.count; }

  /// Throws DimensionError on length mismatch or duplicate label.
  void add(std::string label, std::vector<double> values);

  [[nodiscard]] bool contains(std::string_view label) const;
  [[nodiscard]] std::span<const double> series(std::string_view label) const;
  [[nodiscard]] const std::vector<std::pair<std::string, std::vector<double>>>&
  columns() const {
    return columns_;
  }

  /// Free-form provenance (chain parameters, initial-state descriptor...).
  std::vector<std::pair<std::string, std::string>> meta;

 private:
  TimeGrid grid_;
  std::vector<std::pair<std::string, std::vector<double>>> columns_;
};

}  // namespace dimersync
