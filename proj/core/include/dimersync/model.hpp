#pragma once

// Physical model of the dissipative dimer chain: parameters, dense
// operators in the 2^N spin basis and the auxiliary parameter derivations
// for the optical-lattice implementation.
//
// Basis convention: computational state index `a` has bit j set when spin j
// (0-based; 1-based site j+1) is excited. Odd 1-based sites, i.e. even
// 0-based indices, carry (omega1, gamma1).

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace dimersync {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense operators are capped at this many spins (dimension 4096).
inline constexpr int kMaxSpins = 12;

/// Complex eigenfrequency: real part is the oscillation frequency, imaginary
/// part is minus the decay rate.
struct ComplexFrequency {
  cplx value{};

  [[nodiscard]] double frequency() const { return value.real(); }
  [[nodiscard]] double decay_rate() const { return -value.imag(); }
};

class ChainParams {
 public:
  ChainParams(int n_spins, double omega1, double omega2, double lambda,
              double gamma1, double gamma2);

  /// Rates tied to the local frequencies, gamma_j = ratio * omega_j.
  static ChainParams with_rate_ratio(int n_spins, double omega1, double omega2,
                                     double lambda, double ratio);

  [[nodiscard]] int n_spins() const { return n_spins_; }
  [[nodiscard]] int n_cells() const { return n_spins_ / 2; }
  [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_spins_; }
  [[nodiscard]] double omega1() const { return omega1_; }
  [[nodiscard]] double omega2() const { return omega2_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double gamma1() const { return gamma1_; }
  [[nodiscard]] double gamma2() const { return gamma2_; }
  [[nodiscard]] double delta() const { return omega1_ - omega2_; }

  /// Frequency and rate of 0-based site `site`.
  [[nodiscard]] double omega(int site) const {
    return site % 2 == 0 ? omega1_ : omega2_;
  }
  [[nodiscard]] double gamma(int site) const {
    return site % 2 == 0 ? gamma1_ : gamma2_;
  }

  /// Sublattice complex frequencies omega - i gamma.
  [[nodiscard]] ComplexFrequency big_omega1() const {
    return {cplx{omega1_, -gamma1_}};
  }
  [[nodiscard]] ComplexFrequency big_omega2() const {
    return {cplx{omega2_, -gamma2_}};
  }

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;

 private:
  int n_spins_;
  double omega1_;
  double omega2_;
  double lambda_;
  double gamma1_;
  double gamma2_;
};

/// H = sum_j (omega_j/2) sz_j + lambda sum_j (s+_j s-_{j+1} + h.c.), open chain.
[[nodiscard]] Matrix build_hamiltonian(const ChainParams& params);

/// K = H - i sum_j gamma_j s+_j s-_j.
[[nodiscard]] Matrix build_nonhermitian_k(const ChainParams& params);

/// The N x N single-particle matrix of K: the one-excitation block measured
/// from the vacuum energy. Diagonal Omega_{1,2} alternating, lambda on the
/// first off-diagonals. Complex symmetric.
[[nodiscard]] Matrix single_particle_matrix(const ChainParams& params);

/// Cuts the one-excitation block out of a full 2^N operator and shifts it by
/// the vacuum diagonal element.
[[nodiscard]] Matrix extract_one_excitation_block(const Matrix& full_operator,
                                                  int n_spins);

/// Total excitation number operator sum_j s+_j s-_j.
[[nodiscard]] Matrix excitation_number(int n_spins);

/// d(rho)/dt under the Lindblad generator. Throws DimensionError when rho
/// does not match the chain, ConfigError when rho is not a Hermitian,
/// unit-trace matrix.
[[nodiscard]] Matrix apply_liouvillian(const ChainParams& params,
                                       const Matrix& rho);

// --- optical-lattice implementation -------------------------------------

/// Two-band Bose-Hubbard parameters, all in kHz.
struct BoseHubbardParams {
  double t0;
  double t1;
  double u00;
  double u11;
  double u01;
};

/// Effective spin-chain parameters (kHz). `lambda_eff` carries the sign of
/// the second-order exchange; the chain model only depends on lambda^2.
struct EffectiveSpinParams {
  double lambda_eff;
  double h_z;
  double lambda_z;
};

/// Second-order exchange coefficients of the one-atom-per-site manifold,
/// evaluated at detuning `delta` (exact forms, before the delta -> 0 limit).
struct ExchangeCoefficients {
  double c1;
  double c2;
  double c3;
  double c4;
  double c5;
};

/// Returns true when U >> t holds by at least a factor of `margin`. Only
/// advisory: effective_spin_params does not reject weakly separated scales.
[[nodiscard]] bool hierarchy_satisfied(const BoseHubbardParams& bh,
                                       double margin = 5.0);

/// Approximate (delta-independent) closed forms. Throws ConfigError on
/// nonpositive repulsion energies or tunneling rates.
[[nodiscard]] EffectiveSpinParams effective_spin_params(
    const BoseHubbardParams& bh);

[[nodiscard]] ExchangeCoefficients exchange_coefficients(
    const BoseHubbardParams& bh, double delta);

/// Raman-cooling parameters for one lattice site.
struct CoolingParams {
  double eta;         // Lamb-Dicke parameter
  double omega_eff;   // effective Rabi frequency
  double gamma_int;   // effective internal decay rate
  double gamma_deph;  // effective dephasing rate
  double delta_r;     // effective detuning
  double omega_tilde; // motional frequency omega_0 + omega_j
};

[[nodiscard]] bool lamb_dicke_regime(const CoolingParams& cooling,
                                     double max_eta = 0.3);

/// Lorentzian motional decay rate
///   eta^2 Omega_eff^2 (Gamma+gamma) / ((Gamma+gamma)^2 + (delta_r-omega~)^2).
/// Throws ConfigError when Gamma + gamma is not positive.
[[nodiscard]] double engineered_rate(const CoolingParams& cooling);

}  // namespace dimersync
