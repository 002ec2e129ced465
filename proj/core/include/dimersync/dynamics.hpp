#pragma once

// Brute-force Lindblad evolution of the full 2^N density matrix. This is the
// reference path the closed-form one-excitation results are checked against.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dimersync/integrator.hpp"
#include "dimersync/model.hpp"
#include "dimersync/trajectory.hpp"

namespace dimersync {

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10), unit trace (1e-9) and positivity
  /// (minimum eigenvalue >= -1e-8).
  explicit DensityMatrix(Matrix rho);

  static DensityMatrix from_pure(const Vector& psi);

  [[nodiscard]] const Matrix& matrix() const { return rho_; }
  [[nodiscard]] Eigen::Index dim() const { return rho_.rows(); }
  [[nodiscard]] double trace() const { return rho_.trace().real(); }

 private:
  Matrix rho_;
};

/// c0 |0> + sum_j c_j |{1}_j>, amplitudes indexed by 0-based site.
struct OneExcitationAmplitudes {
  cplx vacuum;
  std::vector<cplx> sites;
};

class InitialState {
 public:
  static InitialState vacuum();
  /// |+>_1 (x) ... (x) |+>_N with |+> = (|0> + |1>)/sqrt(2).
  static InitialState product_plus();
  /// Throws ConfigError unless |c0|^2 + sum |c_j|^2 = 1 within 1e-12.
  static InitialState one_excitation(cplx vacuum, std::vector<cplx> sites);
  /// |0>/sqrt(2) + (|{1}_a> + |{1}_b>)/2 for 0-based sites a != b.
  static InitialState pair_superposition(int n_spins, int site_a, int site_b);
  /// |0>/sqrt(2) + sum_j |{1}_j> / sqrt(2N).
  static InitialState uniform_superposition(int n_spins);
  /// Explicit 2^N state vector; must be normalized within 1e-12.
  static InitialState state_vector(Vector psi);

  [[nodiscard]] Vector vector(int n_spins) const;
  [[nodiscard]] DensityMatrix density_matrix(int n_spins) const;

  /// Amplitudes when the state lives in span{|0>, |{1}_j>}.
  [[nodiscard]] std::optional<OneExcitationAmplitudes> one_excitation_amplitudes(
      int n_spins) const;

  [[nodiscard]] const std::string& descriptor() const { return descriptor_; }

 private:
  struct Vacuum {};
  struct ProductPlus {};
  using Payload =
      std::variant<Vacuum, ProductPlus, OneExcitationAmplitudes, Vector>;

  InitialState(Payload payload, std::string descriptor)
      : payload_(std::move(payload)), descriptor_(std::move(descriptor)) {}

  Payload payload_;
  std::string descriptor_;
};

/// Single-time observables. Site indices are 0-based; labels are 1-based.
struct Observable {
  enum class Kind {
    sx,         // <s^x_j>
    sy,         // <s^y_j>
    sz,         // <s^z_j>
    population, // <s+_j s-_j>
    sxsx,       // <s^x_j s^x_j'>
    spsm_re,    // Re <s+_j s-_j'>
    spsm_im,    // Im <s+_j s-_j'>
  };
  Kind kind;
  int site;
  int other = -1;

  static Observable sigma_x(int j) { return {Kind::sx, j}; }
  static Observable sigma_y(int j) { return {Kind::sy, j}; }
  static Observable sigma_z(int j) { return {Kind::sz, j}; }
  static Observable population_of(int j) { return {Kind::population, j}; }
  static Observable sigma_x_pair(int j, int jp) { return {Kind::sxsx, j, jp}; }
  static Observable raise_lower_re(int j, int jp) {
    return {Kind::spsm_re, j, jp};
  }
  static Observable raise_lower_im(int j, int jp) {
    return {Kind::spsm_im, j, jp};
  }

  /// `sx_1`, `sxsx_1_2`, `n_3`, ...
  [[nodiscard]] std::string label() const;
  /// Parses a label back; throws ConfigError.
  static Observable parse(std::string_view label);

  friend bool operator==(const Observable&, const Observable&) = default;
};

/// Expectation values read directly from a (not necessarily Hermitian)
/// operator in the spin basis.
[[nodiscard]] cplx lowering_expectation(const Matrix& rho, int site);
[[nodiscard]] cplx raise_lower_expectation(const Matrix& rho, int site,
                                           int other);
[[nodiscard]] double expectation(const Matrix& rho, const Observable& obs);

/// Default sampling step (2 pi / omega_max) / 50, omega_max = max(omega1,
/// omega2 + 2 lambda).
[[nodiscard]] double default_sample_step(const ChainParams& params);

struct EvolveOptions {
  double t_end = 0.0;
  double dt_sample = 0.0;  // 0 selects default_sample_step
  double sample_start = 0.0;
  IntegratorOptions integrator{};
};

/// Integrates the master equation from t = 0 and samples the observables on
/// the grid sample_start + i * dt_sample up to t_end. Throws NumericalError
/// on step underflow and ConfigError on invalid times or observables.
[[nodiscard]] Trajectory evolve(const ChainParams& params,
                                const InitialState& init,
                                const EvolveOptions& options,
                                const std::vector<Observable>& observables);

/// Time series of <s^x_j s^x_j'> (same integration as evolve).
[[nodiscard]] Trajectory equal_time_correlator(const ChainParams& params,
                                               const InitialState& init,
                                               const EvolveOptions& options,
                                               int site, int other);

/// Propagates an arbitrary operator X under the Liouvillian (linear map, no
/// Hermiticity requirement) and calls visit(t, X(t)) on every grid time.
/// Used for two-time correlations via the regression identity.
void propagate(const ChainParams& params, Matrix x, const TimeGrid& grid,
               const IntegratorOptions& integrator,
               const std::function<void(double, const Matrix&)>& visit);

/// Every coherence <s^x_j>, j = 1..N.
[[nodiscard]] std::vector<Observable> all_coherences(int n_spins);

}  // namespace dimersync
