#include "dimersync/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "dimersync/error.hpp"
#include "dimersync/lindblad.hpp"

namespace dimersync {

ChainParams::ChainParams(int n_spins, double omega1, double omega2,
                         double lambda, double gamma1, double gamma2)
    : n_spins_(n_spins),
      omega1_(omega1),
      omega2_(omega2),
      lambda_(lambda),
      gamma1_(gamma1),
      gamma2_(gamma2) {
  if (n_spins < 2 || n_spins % 2 != 0) {
    throw ConfigError("n_spins must be an even integer >= 2, got " +
                      std::to_string(n_spins));
  }
  if (n_spins > kMaxSpins) {
    throw ConfigError("n_spins = " + std::to_string(n_spins) +
                      " exceeds the dense-matrix cap of " +
                      std::to_string(kMaxSpins));
  }
  for (double v : {omega1, omega2, lambda, gamma1, gamma2}) {
    if (!std::isfinite(v)) throw ConfigError("chain parameters must be finite");
  }
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw ConfigError("decay rates must be nonnegative");
  }
}

ChainParams ChainParams::with_rate_ratio(int n_spins, double omega1,
                                         double omega2, double lambda,
                                         double ratio) {
  return ChainParams(n_spins, omega1, omega2, lambda, ratio * omega1,
                     ratio * omega2);
}

std::string ChainParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "N=" << n_spins_ << " omega1=" << omega1_ << " omega2=" << omega2_
     << " lambda=" << lambda_ << " gamma1=" << gamma1_
     << " gamma2=" << gamma2_;
  return os.str();
}

namespace {

bool excited(std::size_t state, int site) { return (state >> site) & 1U; }

Matrix build_operator(const ChainParams& p, bool with_losses) {
  const auto dim = static_cast<Eigen::Index>(p.dim());
  Matrix op = Matrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const auto s = static_cast<std::size_t>(a);
    cplx diag{0.0, 0.0};
    for (int j = 0; j < p.n_spins(); ++j) {
      const bool up = excited(s, j);
      diag += 0.5 * p.omega(j) * (up ? 1.0 : -1.0);
      if (with_losses && up) diag -= cplx{0.0, p.gamma(j)};
    }
    op(a, a) = diag;
    for (int j = 0; j + 1 < p.n_spins(); ++j) {
      if (excited(s, j) != excited(s, j + 1)) {
        const auto b = static_cast<Eigen::Index>(s ^ (std::size_t{3} << j));
        op(a, b) = p.lambda();
      }
    }
  }
  return op;
}

void check_density_matrix(const ChainParams& p, const Matrix& rho) {
  const auto dim = static_cast<Eigen::Index>(p.dim());
  if (rho.rows() != dim || rho.cols() != dim) {
    throw DimensionError("density matrix is " + std::to_string(rho.rows()) +
                         "x" + std::to_string(rho.cols()) + ", chain needs " +
                         std::to_string(dim));
  }
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ConfigError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-9) {
    throw ConfigError("density matrix trace differs from 1");
  }
}

}  // namespace

Matrix build_hamiltonian(const ChainParams& params) {
  return build_operator(params, false);
}

Matrix build_nonhermitian_k(const ChainParams& params) {
  return build_operator(params, true);
}

Matrix single_particle_matrix(const ChainParams& params) {
  const int n = params.n_spins();
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = cplx{params.omega(j), -params.gamma(j)};
    if (j + 1 < n) {
      m(j, j + 1) = params.lambda();
      m(j + 1, j) = params.lambda();
    }
  }
  return m;
}

Matrix extract_one_excitation_block(const Matrix& full_operator, int n_spins) {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  if (full_operator.rows() != dim || full_operator.cols() != dim) {
    throw DimensionError("operator dimension does not match n_spins");
  }
  Matrix block(n_spins, n_spins);
  const cplx e0 = full_operator(0, 0);
  for (int i = 0; i < n_spins; ++i) {
    for (int j = 0; j < n_spins; ++j) {
      block(i, j) = full_operator(Eigen::Index{1} << i, Eigen::Index{1} << j);
    }
    block(i, i) -= e0;
  }
  return block;
}

Matrix excitation_number(int n_spins) {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  Matrix n = Matrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    n(a, a) = static_cast<double>(std::popcount(static_cast<std::uint64_t>(a)));
  }
  return n;
}

Matrix apply_liouvillian(const ChainParams& params, const Matrix& rho) {
  check_density_matrix(params, rho);
  Matrix out;
  LindbladGenerator(params).apply(rho, out);
  return out;
}

// --- lattice implementation ---------------------------------------------

bool hierarchy_satisfied(const BoseHubbardParams& bh, double margin) {
  const double t_max = std::max(bh.t0, bh.t1);
  const double u_min = std::min({bh.u00, bh.u11, bh.u01});
  return u_min >= margin * t_max;
}

namespace {
void validate(const BoseHubbardParams& bh) {
  if (!(bh.u00 > 0.0 && bh.u11 > 0.0 && bh.u01 > 0.0)) {
    throw ConfigError("repulsion energies U00, U11, U01 must be positive");
  }
  if (!(bh.t0 > 0.0 && bh.t1 > 0.0)) {
    throw ConfigError("tunneling rates t0, t1 must be positive");
  }
}
}  // namespace

EffectiveSpinParams effective_spin_params(const BoseHubbardParams& bh) {
  validate(bh);
  const double a = bh.t0 * bh.t0 / bh.u00;
  const double b = bh.t1 * bh.t1 / bh.u11;
  const double c = (bh.t0 * bh.t0 + bh.t1 * bh.t1) / bh.u01;
  return {
      .lambda_eff = -2.0 * bh.t0 * bh.t1 / bh.u01,
      .h_z = 0.5 * (a - b),
      .lambda_z = -0.5 * (a + b - c),
  };
}

ExchangeCoefficients exchange_coefficients(const BoseHubbardParams& bh,
                                           double delta) {
  validate(bh);
  const double t00 = bh.t0 * bh.t0;
  const double t11 = bh.t1 * bh.t1;
  const double t01 = bh.t0 * bh.t1;
  const double tsum = t00 + t11;
  // Exchange terms pair virtual states at U - delta and U + delta.
  return {
      .c1 = -t00 / (bh.u00 - delta) - t00 / (bh.u00 + delta),
      .c2 = -t11 / (bh.u11 - delta) - t11 / (bh.u11 + delta),
      .c3 = -t01 / (bh.u01 - delta) - t01 / (bh.u01 + delta),
      .c4 = -tsum / (bh.u01 - delta),
      .c5 = -tsum / (bh.u01 + delta),
  };
}

bool lamb_dicke_regime(const CoolingParams& cooling, double max_eta) {
  return std::abs(cooling.eta) <= max_eta;
}

double engineered_rate(const CoolingParams& cooling) {
  const double width = cooling.gamma_int + cooling.gamma_deph;
  if (!(width > 0.0)) {
    throw ConfigError("Gamma + gamma must be positive for the cooling rate");
  }
  const double detuning = cooling.delta_r - cooling.omega_tilde;
  const double coupling = cooling.eta * cooling.omega_eff;
  return coupling * coupling * width / (width * width + detuning * detuning);
}

}  // namespace dimersync
