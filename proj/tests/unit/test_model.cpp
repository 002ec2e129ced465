#include <random>

#include <gtest/gtest.h>

#include "dimersync/error.hpp"
#include "dimersync/lindblad.hpp"
#include "dimersync/model.hpp"
#include "oracles.hpp"

using namespace dimersync;

TEST(ChainParams, ExposesDetuningAndSublatticeValues) {
  const ChainParams p(4, 1.0, 0.25, 0.4, 0.05, 0.0125);
  EXPECT_DOUBLE_EQ(p.delta(), 0.75);
  EXPECT_EQ(p.n_cells(), 2);
  EXPECT_EQ(p.dim(), 16u);
  EXPECT_DOUBLE_EQ(p.omega(0), 1.0);
  EXPECT_DOUBLE_EQ(p.omega(1), 0.25);
  EXPECT_DOUBLE_EQ(p.gamma(2), 0.05);
  EXPECT_DOUBLE_EQ(p.gamma(3), 0.0125);
  EXPECT_EQ(p.big_omega2().value, (cplx{0.25, -0.0125}));
}

TEST(ChainParams, RateRatioTiesRatesToFrequencies) {
  const auto p = ChainParams::with_rate_ratio(6, 1.0, 0.2, 0.1, 0.05);
  EXPECT_DOUBLE_EQ(p.gamma1(), 0.05);
  EXPECT_DOUBLE_EQ(p.gamma2(), 0.01);
}

TEST(ChainParams, RejectsInvalidInput) {
  EXPECT_THROW(ChainParams(3, 1, 0.5, 0.1, 0.05, 0.05), ConfigError);
  EXPECT_THROW(ChainParams(0, 1, 0.5, 0.1, 0.05, 0.05), ConfigError);
  EXPECT_THROW(ChainParams(14, 1, 0.5, 0.1, 0.05, 0.05), ConfigError);
  EXPECT_THROW(ChainParams(4, 1, 0.5, 0.1, -0.05, 0.05), ConfigError);
  EXPECT_THROW(ChainParams(4, 1, 0.5, 0.1, 0.05, -1e-3), ConfigError);
  EXPECT_THROW(ChainParams(4, 1, std::nan(""), 0.1, 0.05, 0.05), ConfigError);
}

TEST(Operators, HamiltonianIsHermitian) {
  const ChainParams p(6, 1.0, 0.3, 0.37, 0.05, 0.015);
  const Matrix h = build_hamiltonian(p);
  EXPECT_LE((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * h.cwiseAbs().maxCoeff());
}

TEST(Operators, EffectiveHamiltonianHasPositiveDiagonalLoss) {
  const ChainParams p(4, 1.0, 0.3, 0.37, 0.05, 0.015);
  const Matrix h = build_hamiltonian(p);
  const Matrix k = build_nonhermitian_k(p);
  const Matrix d = cplx{0.0, 1.0} * (k - h);
  EXPECT_LE(d.imag().cwiseAbs().maxCoeff(), 1e-15);
  Matrix off = d;
  off.diagonal().setZero();
  EXPECT_LE(off.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GE(d.diagonal().real().minCoeff(), 0.0);
  // Loss on a basis state is the sum of its excited-site rates.
  EXPECT_NEAR(d(0b0101, 0b0101).real(), 2 * 0.05, 1e-15);
  EXPECT_NEAR(d(0b1010, 0b1010).real(), 2 * 0.015, 1e-15);
}

TEST(Operators, ExcitationNumberIsConserved) {
  const ChainParams p(6, 1.0, 0.3, 0.37, 0.05, 0.015);
  const Matrix h = build_hamiltonian(p);
  const Matrix n = excitation_number(6);
  EXPECT_LE((h * n - n * h).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Operators, SingleParticleMatrixMatchesOneExcitationBlock) {
  const ChainParams p(6, 1.0, 0.3, 0.37, 0.05, 0.015);
  const Matrix kf = single_particle_matrix(p);
  const Matrix block = extract_one_excitation_block(build_nonhermitian_k(p), 6);
  EXPECT_LE((kf - block).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((kf - kf.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(kf(0, 0), (cplx{1.0, -0.05}));
  EXPECT_EQ(kf(1, 1), (cplx{0.3, -0.015}));
  EXPECT_EQ(kf(2, 3), (cplx{0.37, 0.0}));
  EXPECT_EQ(kf(0, 2), (cplx{0.0, 0.0}));
}

TEST(Liouvillian, MatchesDenseOperatorConstruction) {
  std::mt19937_64 rng(7);
  for (int n : {2, 4, 6}) {
    const ChainParams p(n, 1.0, 0.35, 0.21, 0.05, 0.02);
    const Matrix rho = oracle::random_density_matrix(Eigen::Index{1} << n, rng);
    const Matrix fast = apply_liouvillian(p, rho);
    const Matrix dense = oracle::dense_liouvillian_apply(p, rho);
    EXPECT_LE((fast - dense).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
  }
}

TEST(Liouvillian, PreservesTraceAndHermiticity) {
  std::mt19937_64 rng(11);
  const ChainParams p(4, 1.0, 0.2, 0.4, 0.05, 0.01);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix rho = oracle::random_density_matrix(16, rng);
    const Matrix d = apply_liouvillian(p, rho);
    EXPECT_LE(std::abs(d.trace()), 1e-13);
    EXPECT_LE((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Liouvillian, UnitaryPartIsCommutator) {
  std::mt19937_64 rng(3);
  const ChainParams p(4, 1.0, 0.2, 0.4, 0.05, 0.01);
  const Matrix rho = oracle::random_density_matrix(16, rng);
  const Matrix h = build_hamiltonian(p);
  Matrix out;
  LindbladGenerator(p).apply_unitary(rho, out);
  const Matrix ref = cplx{0.0, -1.0} * (h * rho - rho * h);
  EXPECT_LE((out - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Liouvillian, ValidatesInput) {
  const ChainParams p(4, 1.0, 0.2, 0.4, 0.05, 0.01);
  EXPECT_THROW((void)apply_liouvillian(p, Matrix::Identity(8, 8) / 8.0),
               DimensionError);
  Matrix bad = Matrix::Identity(16, 16) / 16.0;
  bad(0, 1) = cplx{0.1, 0.0};
  EXPECT_THROW((void)apply_liouvillian(p, bad), ConfigError);
  EXPECT_THROW((void)apply_liouvillian(p, Matrix::Identity(16, 16)), ConfigError);
}

TEST(BoseHubbard, CouplingFromSymmetricTunneling) {
  const BoseHubbardParams bh{4.0, 4.0, 40.0, 40.0, 40.0};
  const EffectiveSpinParams eff = effective_spin_params(bh);
  EXPECT_NEAR(std::abs(eff.lambda_eff), 0.8, 0.8 * 1e-12);
  EXPECT_LT(eff.lambda_eff, 0.0);
  EXPECT_DOUBLE_EQ(eff.h_z, 0.0);
  EXPECT_NEAR(eff.lambda_z, 0.0, 1e-15);
}

TEST(BoseHubbard, FieldShiftAndIsingTerm) {
  const BoseHubbardParams bh{2.0, 3.0, 30.0, 45.0, 50.0};
  const EffectiveSpinParams eff = effective_spin_params(bh);
  EXPECT_NEAR(eff.lambda_eff, -2.0 * 6.0 / 50.0, 1e-15);
  EXPECT_NEAR(eff.h_z, 0.5 * (4.0 / 30.0 - 9.0 / 45.0), 1e-15);
  EXPECT_NEAR(eff.lambda_z, -0.5 * (4.0 / 30.0 + 9.0 / 45.0 - 13.0 / 50.0), 1e-15);
}

TEST(BoseHubbard, ExchangeCoefficientsReduceAtZeroDetuning) {
  const BoseHubbardParams bh{2.0, 3.0, 30.0, 45.0, 50.0};
  const auto c = exchange_coefficients(bh, 0.0);
  EXPECT_NEAR(c.c1, -2.0 * 4.0 / 30.0, 1e-15);
  EXPECT_NEAR(c.c2, -2.0 * 9.0 / 45.0, 1e-15);
  EXPECT_NEAR(c.c3, effective_spin_params(bh).lambda_eff, 1e-15);
  EXPECT_NEAR(c.c4, c.c5, 1e-15);
  const auto shifted = exchange_coefficients(bh, 5.0);
  EXPECT_NEAR(shifted.c3, -6.0 / 45.0 - 6.0 / 55.0, 1e-15);
  EXPECT_NE(shifted.c4, shifted.c5);
}

TEST(BoseHubbard, RejectsNonPositiveInput) {
  EXPECT_THROW((void)effective_spin_params({4, 4, 40, 0, 40}), ConfigError);
  EXPECT_THROW((void)effective_spin_params({-1, 4, 40, 40, 40}), ConfigError);
  EXPECT_TRUE(hierarchy_satisfied({4, 4, 40, 40, 40}));
  EXPECT_FALSE(hierarchy_satisfied({4, 4, 10, 40, 40}));
}

TEST(Cooling, LorentzianRate) {
  CoolingParams c{0.1, 2.0, 0.5, 0.1, 3.0, 3.0};
  EXPECT_NEAR(engineered_rate(c), 0.01 * 4.0 / 0.6, 1e-15);
  c.delta_r = 3.6;
  EXPECT_NEAR(engineered_rate(c), 0.01 * 4.0 * 0.6 / (0.36 + 0.36), 1e-15);
  EXPECT_TRUE(lamb_dicke_regime(c));
  c.eta = 0.5;
  EXPECT_FALSE(lamb_dicke_regime(c));
  c.gamma_int = c.gamma_deph = 0.0;
  EXPECT_THROW((void)engineered_rate(c), ConfigError);
}
