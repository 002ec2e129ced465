#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dimersync/model.hpp"

namespace dimersync {

/// Matrix-free Lindblad generator for the dimer chain. Precomputes the
/// diagonal of K and the nearest-neighbour hopping table once so that
/// repeated applications cost O(dim^2 * N).
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const ChainParams& params);

  [[nodiscard]] const ChainParams& params() const { return params_; }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }

  /// out = L(rho). `rho` need not be Hermitian; the map is linear.
  void apply(const Matrix& rho, Matrix& out) const;

  /// out = -i [H, rho] (the unitary part only).
  void apply_unitary(const Matrix& rho, Matrix& out) const;

 private:
  ChainParams params_;
  Eigen::Index dim_;
  std::vector<cplx> k_diag_;
  // (state, partner) for every ordered pair connected by one hop.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> hops_;
};

}  // namespace dimersync
