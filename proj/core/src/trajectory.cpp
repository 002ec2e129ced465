#include "dimersync/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "dimersync/error.hpp"

namespace dimersync {

std::vector<double> TimeGrid::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = at(i);
  return v;
}

TimeGrid TimeGrid::covering(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("time step must be positive");
  if (stop < start) throw ConfigError("time grid stop precedes start");
  const auto n = static_cast<std::size_t>(std::llround((stop - start) / step));
  return {start, step, n + 1};
}

void Trajectory::add(std::string label, std::vector<double> values) {
  if (values.size() != grid_.count) {
    throw DimensionError("series '" + label + "' has " +
                         std::to_string(values.size()) + " samples, grid has " +
                         std::to_string(grid_.count));
  }
  if (contains(label)) throw DimensionError("duplicate series '" + label + "'");
  columns_.emplace_back(std::move(label), std::move(values));
}

bool Trajectory::contains(std::string_view label) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const auto& c) { return c.first == label; });
}

std::span<const double> Trajectory::series(std::string_view label) const {
  for (const auto& [name, values] : columns_) {
    if (name == label) return values;
  }
  throw ConfigError("trajectory has no series '" + std::string(label) + "'");
}

}  // namespace dimersync
