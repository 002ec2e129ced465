#pragma once

// Closed-form two-band spectrum and open-boundary eigenmodes of the
// single-particle non-Hermitian matrix. These are also the slowest
// one-excitation eigenvalues of the Liouvillian (as -i Omega).

#include <vector>

#include "dimersync/model.hpp"

namespace dimersync {

enum class Band { plus, minus };

[[nodiscard]] const char* to_string(Band band);

struct EigenMode {
  Band band = Band::plus;
  int momentum_index = 0;  // l = 1 .. N/2
  double k = 0.0;          // 2 pi l / (N + 1)
  ComplexFrequency eigenvalue;
  cplx theta{};  // complex mixing angle
  /// Right eigenvector on the N sites. Normalized so that the *transpose*
  /// product v^T v equals 1; the left eigenvector is v^T.
  Vector site_amplitudes;

  [[nodiscard]] double frequency() const { return eigenvalue.frequency(); }
  [[nodiscard]] double decay_rate() const { return eigenvalue.decay_rate(); }
};

struct SpectrumReport {
  /// Sorted by decay rate, then frequency, then (band, l).
  std::vector<EigenMode> modes;
  double ratio_21 = 1.0;  // ratio of the two smallest decay rates, <= 1
  double ratio_23 = 1.0;  // ratio of the per-band smallest decay rates, <= 1
  /// max_l ||v_l||^2 / |v_l^T v_l|; large near exceptional points.
  double max_condition = 1.0;
  [[nodiscard]] bool ill_conditioned() const { return max_condition > 1e6; }
};

struct BandDiagnostics {
  double ratio_21;
  double ratio_23;
  double slow_gap;  // |nu_1 - nu_2| of the two slowest modes
};

/// All N single-particle eigenvalues with their eigenmodes, sorted. Throws
/// ExceptionalPointError when the radicand of some k nearly vanishes.
[[nodiscard]] SpectrumReport analytic_spectrum(const ChainParams& params);

/// The eigenmodes in construction order: for each l = 1..N/2 the plus-band
/// then the minus-band mode.
[[nodiscard]] std::vector<EigenMode> open_boundary_modes(
    const ChainParams& params);

/// Decay-rate ratios and the slow frequency gap. Requires N >= 4.
[[nodiscard]] BandDiagnostics band_diagnostics(const ChainParams& params);
[[nodiscard]] BandDiagnostics band_diagnostics(const SpectrumReport& report);

/// Orders modes by (decay rate, frequency, band, l).
void sort_modes(std::vector<EigenMode>& modes);

namespace detail {

/// Periodic-boundary Bloch modes of a chain with `n_cells` dimer cells,
/// k = 2 pi l / M, l = 0 .. M-1. Site order a_0, b_0, a_1, b_1, ...
struct BlochMode {
  Band band;
  int momentum_index;
  double k;
  cplx eigenvalue;
  cplx theta;
  Vector site_amplitudes;
};

[[nodiscard]] std::vector<BlochMode> periodic_modes(const ChainParams& params);

/// Single-particle matrix with the wrap-around bond a_0 <-> b_{M-1}.
[[nodiscard]] Matrix periodic_single_particle_matrix(const ChainParams& params);

/// Eigenvalues of the 2x2 Bloch block at momentum k, plus band first.
[[nodiscard]] std::pair<cplx, cplx> band_pair(const ChainParams& params,
                                              double k);

}  // namespace detail

}  // namespace dimersync
