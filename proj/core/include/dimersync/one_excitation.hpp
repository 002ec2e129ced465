#pragma once

// Closed-form dynamics in the one-excitation sector, expanded over the
// biorthogonal eigenmodes of the single-particle matrix.

#include <vector>

#include "dimersync/dynamics.hpp"
#include "dimersync/spectrum.hpp"
#include "dimersync/trajectory.hpp"

namespace dimersync {

/// Modal expansion of <s-_j(t)> = sum_l u_l(j) exp(-i Omega_l t) for a state
/// c0 |0> + sum_j c_j |{1}_j>. The amplitudes are not required to be
/// normalized, which lets the same expansion serve the regression identity.
class CoherenceExpansion {
 public:
  CoherenceExpansion(std::vector<EigenMode> modes, cplx vacuum,
                     const std::vector<cplx>& sites);

  [[nodiscard]] const std::vector<EigenMode>& modes() const { return modes_; }
  /// a_l = sum_j K_l(j) c_j (left vector is the transpose).
  [[nodiscard]] const Vector& overlaps() const { return overlaps_; }
  /// u(l, j) = a_l conj(c0) K_l(j).
  [[nodiscard]] const Matrix& u() const { return u_; }
  [[nodiscard]] int n_sites() const { return static_cast<int>(u_.cols()); }

  [[nodiscard]] cplx lowering(int site, double t) const;
  [[nodiscard]] double coherence(int site, double t) const {
    return 2.0 * lowering(site, t).real();
  }

  /// w(l, m) = a_l conj(a_m) conj(K_m(j)) K_l(j').
  [[nodiscard]] Matrix pair_weights(int site, int other) const;
  /// <s+_j s-_j'>(t) = sum_{l,m} w(l,m) exp(-i (Omega_l - conj Omega_m) t).
  [[nodiscard]] cplx raise_lower(int site, int other, double t) const;

  /// Samples <s^x_j> for every site on the grid (rows: sites).
  [[nodiscard]] Eigen::MatrixXd sample_coherences(const TimeGrid& grid) const;

 private:
  std::vector<EigenMode> modes_;
  cplx vacuum_;
  Vector overlaps_;
  Matrix u_;
};

struct ModeWeights {
  std::vector<EigenMode> modes;  // sorted as in SpectrumReport
  Matrix u;                      // mode x site
  /// One entry per requested pair, mode x mode.
  std::vector<Matrix> w;
  /// One column per requested pair, indexed by mode.
  Matrix v;
};

struct SitePair {
  int site;
  int other;
};

/// Throws ConfigError when `init` has support outside {|0>, |{1}_j>} and
/// ExceptionalPointError at exceptional points.
[[nodiscard]] CoherenceExpansion coherence_expansion(const ChainParams& params,
                                                     const InitialState& init);

[[nodiscard]] ModeWeights mode_weights(const ChainParams& params,
                                       const InitialState& init,
                                       const std::vector<SitePair>& pairs);

/// v_l(j, j') = K_l(j') K_l(j); sums to delta_{j j'}.
[[nodiscard]] Vector correlation_weights(const std::vector<EigenMode>& modes,
                                         int site, int other);

/// <s^x_j(t)> for all sites from the eigenmode expansion (labels sx_j).
[[nodiscard]] Trajectory coherence_evolution(const ChainParams& params,
                                             const InitialState& init,
                                             const TimeGrid& grid);

/// <s^x_j(t) s^x_j'(t)> from the double-mode expansion (label sxsx_j_j').
[[nodiscard]] Trajectory correlator_evolution(const ChainParams& params,
                                              const InitialState& init,
                                              const TimeGrid& grid,
                                              SitePair pair);

/// <s-_j(tau) s+_j'(0)> in the vacuum steady state. Evaluated as the
/// coherence expansion seeded by s+_j'|0>; series `re_j_j'` and `im_j_j'`.
[[nodiscard]] Trajectory two_time_correlation(const ChainParams& params,
                                              SitePair pair,
                                              const TimeGrid& taus);

struct SpectralComponent {
  double nu;
  double gamma;
  cplx weight;
};

struct LorentzianSpectrum {
  SitePair pair{};
  std::vector<double> nu_grid;
  std::vector<double> values;      // signed S(nu)
  std::vector<double> abs_values;  // |S(nu)|
  std::vector<SpectralComponent> components;

  /// Distinct peaks: local maxima of |S| above `relative` of the maximum.
  [[nodiscard]] int count_peaks(double relative = 0.05) const;
};

/// S(nu) = (1/2pi) sum_l [G_l Re v_l + (nu + nu_l) Im v_l] / [G_l^2 + (nu + nu_l)^2].
[[nodiscard]] double lorentzian_sum(const std::vector<SpectralComponent>& c,
                                    double nu);

/// 2001 points on [-2 m, 2 m], m = max_l |nu_l| (m = 1 if all vanish).
[[nodiscard]] std::vector<double> default_nu_grid(
    const std::vector<EigenMode>& modes, int points = 2001);

/// Empty `nu_grid` selects default_nu_grid.
[[nodiscard]] LorentzianSpectrum correlation_spectrum(
    const ChainParams& params, SitePair pair, std::vector<double> nu_grid = {});

}  // namespace dimersync
