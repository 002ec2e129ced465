#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dimersync/dynamics.hpp"
#include "dimersync/lindblad.hpp"
#include "dimersync/model.hpp"
#include "dimersync/one_excitation.hpp"
#include "dimersync/spectrum.hpp"
#include "dimersync/sweep.hpp"
#include "dimersync/sync_metrics.hpp"
#include "oracles.hpp"

using namespace dimersync;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

SweepConfig region_config() {
  SweepConfig c;
  c.n_spins = 4;
  c.gamma_ratio = 0.05;
  c.initial_state = "pair:2,3";
  c.eval_time = 10.0;
  c.window = 80.0;
  return c;
}

double c_t_at(SweepConfig c, double lambda, double delta) {
  c.lambda = lambda;
  c.delta = delta;
  return evaluate_point(c, c.base_params()).sync.c_t;
}

Outcome oracle_equivalence() {
  const ChainParams p = ChainParams::with_rate_ratio(4, 1.0, 0.75, 0.3, 0.05);
  const InitialState init = InitialState::one_excitation(
      std::sqrt(0.5), {0.0, std::sqrt(0.5), 0.0, 0.0});
  EvolveOptions opt;
  opt.t_end = 10.0 / p.gamma1();
  opt.dt_sample = 0.1;
  const Trajectory ode = evolve(p, init, opt,
                                {Observable::sigma_x(0), Observable::sigma_x_pair(0, 1)});
  const TimeGrid& grid = ode.grid();
  const Trajectory sx = coherence_evolution(p, init, grid);
  const Trajectory zz = correlator_evolution(p, init, grid, {0, 1});
  const double d_sx = max_abs_diff(ode.series("sx_1"), sx.series("sx_1"));
  const double d_zz = max_abs_diff(ode.series("sxsx_1_2"), zz.series("sxsx_1_2"));

  const Trajectory corr = two_time_correlation(p, {0, 1}, grid);
  Matrix x = Matrix::Zero(16, 16);
  x(0b0010, 0) = 1.0;
  std::vector<double> im;
  propagate(p, x, grid, {}, [&](double, const Matrix& m) {
    im.push_back(lowering_expectation(m, 0).imag());
  });
  const double d_im = max_abs_diff(im, corr.series("im_1_2"));
  const double worst = std::max({d_sx, d_zz, d_im});
  return {worst <= 1e-6,
          fmt("max|diff| sx=%.2e sxsx=%.2e Im corr=%.2e (tol 1e-6)", d_sx, d_zz, d_im)};
}

Outcome spectrum_oracle() {
  std::mt19937_64 rng(20240607);
  double worst_eig = 0.0, worst_pair = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const ChainParams p = oracle::random_chain(rng);
    std::vector<cplx> analytic;
    const auto modes = open_boundary_modes(p);
    for (const auto& m : modes) analytic.push_back(m.eigenvalue.value);
    worst_eig = std::max(worst_eig, oracle::multiset_distance(
                                        analytic, oracle::dense_one_excitation_eigenvalues(p)));
    const cplx sum = p.big_omega1().value + p.big_omega2().value;
    for (std::size_t i = 0; i < modes.size(); i += 2) {
      const cplx pair = modes[i].eigenvalue.value + modes[i + 1].eigenvalue.value;
      worst_pair = std::max(worst_pair, std::abs(pair - sum));
    }
  }
  return {worst_eig <= 1e-9 && worst_pair <= 1e-12,
          fmt("eigenvalue distance %.2e (tol 1e-9), pairing %.2e (tol 1e-12)", worst_eig,
              worst_pair)};
}

Outcome uniform_loss_contrast() {
  SweepConfig c;
  c.n_spins = 4;
  c.delta = 0.75;
  c.lambda = 0.4;
  c.gamma1 = 0.05;
  c.initial_state = "product_plus";
  c.eval_time = 10.0;
  c.window = 3.0;
  c.loss_ratio = 4.0;
  const double staggered = evaluate_point(c, c.base_params()).sync.c_t;
  c.loss_ratio = 1.0;
  const double uniform = evaluate_point(c, c.base_params()).sync.c_t;
  return {staggered >= 0.9 && staggered - uniform >= 0.3,
          fmt("C_T staggered %.4f (>= 0.9), uniform %.4f, gap %.4f (>= 0.3)", staggered,
              uniform, staggered - uniform)};
}

Outcome region_points() {
  const SweepConfig c = region_config();
  const double ii = c_t_at(c, 0.05, 0.8);
  const double i = c_t_at(c, 0.5, 0.8);
  const double gap = c_t_at(c, 0.2, 0.8);
  const double off = c_t_at(c, 0.5, 0.1);
  return {ii >= 0.9 && i >= 0.9 && gap < 0.9 && off < 0.9,
          fmt("C_T(0.05,0.8)=%.4f C_T(0.5,0.8)=%.4f >= 0.9; C_T(0.2,0.8)=%.4f "
              "C_T(0.5,0.1)=%.4f < 0.9",
              ii, i, gap, off)};
}

Outcome full_map_runtime() {
  SweepConfig c = region_config();
  c.axes = {Axis::parse("delta:0:1:50"), Axis::parse("lambda:0.01:0.5:50")};
  const auto t0 = std::chrono::steady_clock::now();
  const MapResult m = run_sync_map(c, {4, std::nullopt, std::nullopt});
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {s < 600.0 && m.cells.size() == 2500,
          fmt("2500 cells in %.1f s on 4 workers (limit 600 s), %zu flagged", s,
              m.flagged_count())};
}

std::vector<double> decay_rates(const ChainParams& p) {
  std::vector<double> g;
  for (const auto& m : analytic_spectrum(p).modes) g.push_back(m.decay_rate());
  std::sort(g.begin(), g.end());
  return g;
}

Outcome band_clustering() {
  const auto weak = decay_rates(ChainParams::with_rate_ratio(4, 1.0, 0.2, 0.05, 0.05));
  const double gap_a = (weak[1] - weak[0]) / weak[1];
  const double gap_b = (weak[3] - weak[2]) / weak[3];
  const auto strong = decay_rates(ChainParams::with_rate_ratio(4, 1.0, 0.2, 0.5, 0.05));
  double min_sep = 1e9;
  for (std::size_t k = 1; k < strong.size(); ++k) {
    min_sep = std::min(min_sep, (strong[k] - strong[k - 1]) / strong[k]);
  }
  const double sharp = strong[0] / strong[1];
  return {gap_a < 0.1 && gap_b < 0.1 && min_sep > 0.1 && sharp < 0.5,
          fmt("lambda=0.05 intra-pair gaps %.4f %.4f (< 0.1); lambda=0.5 min separation "
              "%.4f (> 0.1), G1/G2 %.4f (< 0.5), G1/G4 %.4f",
              gap_a, gap_b, min_sep, sharp, strong[0] / strong[3])};
}

double synced_fraction(int n, double lmin, double lmax, int lsteps) {
  SweepConfig c = region_config();
  c.n_spins = n;
  c.initial_state = "uniform";
  c.axes = {Axis::parse("delta:0.6:1.0:9"), Axis{SweepParam::lambda, lmin, lmax, lsteps}};
  const MapResult m = run_sync_map(c);
  std::size_t hits = 0;
  for (const auto& cell : m.cells) hits += (!cell.flagged && cell.c_t >= 0.9) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(m.cells.size());
}

Outcome size_scaling() {
  double r1[3], r2[3];
  const int sizes[] = {4, 6, 8};
  for (int k = 0; k < 3; ++k) {
    r1[k] = synced_fraction(sizes[k], 0.35, 0.5, 7);
    r2[k] = synced_fraction(sizes[k], 0.0125, 0.1, 8);
  }
  const bool decreasing = r1[0] > r1[1] && r1[1] > r1[2];
  const bool robust = r2[2] >= 0.5 * r2[0];
  return {decreasing && robust,
          fmt("region I fractions N=4/6/8: %.3f %.3f %.3f (strictly decreasing: %s); "
              "region II: %.3f %.3f %.3f (N=8 >= half of N=4: %s)",
              r1[0], r1[1], r1[2], decreasing ? "yes" : "no", r2[0], r2[1], r2[2],
              robust ? "yes" : "no")};
}

Outcome gamma_dependence() {
  const double ratios[] = {0.05, 0.025, 0.01, 0.005};
  double extent[4];
  for (int k = 0; k < 4; ++k) {
    SweepConfig c = region_config();
    c.gamma_ratio = ratios[k];
    c.delta = 0.8;
    c.axes = {Axis::parse("lambda:0.005:0.25:50")};
    const MapResult m = run_sync_map(c);
    extent[k] = 0.0;
    for (const auto& cell : m.cells) {
      if (!cell.flagged && cell.c_t >= 0.9) extent[k] = std::max(extent[k], cell.coords[0]);
    }
  }
  const bool ok = extent[0] > extent[1] && extent[1] > extent[2] && extent[2] > extent[3];
  return {ok, fmt("largest synchronized lambda at ratio 0.05/0.025/0.01/0.005: "
                  "%.3f %.3f %.3f %.3f (strictly decreasing required)",
                  extent[0], extent[1], extent[2], extent[3])};
}

Outcome property_suites() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) failed.emplace_back(what);
  };
  std::mt19937_64 rng(77);

  // Pearson algebra.
  const TimeGrid grid{0.0, std::numbers::pi / 400.0, 4001};
  std::vector<double> a(grid.count), b(grid.count), c(grid.count), neg(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    a[i] = std::sin(2.0 * grid.at(i));
    b[i] = std::sin(2.0 * grid.at(i) + 0.7);
    c[i] = 4.0 * b[i] - 3.0;
    neg[i] = -a[i];
  }
  const Window w{0.0, 8.0 * std::numbers::pi};
  expect(std::abs(pearson(a, a, grid, w).value - 1.0) < 1e-12, "pearson self");
  expect(std::abs(pearson(a, neg, grid, w).value + 1.0) < 1e-12, "pearson negation");
  expect(std::abs(pearson(a, b, grid, w).value - std::cos(0.7)) < 1e-4, "pearson phase");
  expect(std::abs(pearson(a, c, grid, w).value - pearson(a, b, grid, w).value) < 1e-10,
         "pearson affine invariance");
  expect(pearson(b, a, grid, w).value == pearson(a, b, grid, w).value, "pearson symmetry");

  // Trace and Hermiticity preservation.
  const ChainParams p(4, 1.0, 0.2, 0.4, 0.05, 0.01);
  const Matrix rho = oracle::random_density_matrix(16, rng);
  const Matrix d = apply_liouvillian(p, rho);
  expect(std::abs(d.trace()) < 1e-13, "liouvillian trace");
  expect((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-13, "liouvillian hermiticity");

  // Biorthonormality.
  const auto modes = open_boundary_modes(ChainParams(8, 1.0, 0.3, 0.2, 0.05, 0.015));
  double bio = 0.0;
  for (std::size_t l = 0; l < modes.size(); ++l) {
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const cplx o = (modes[l].site_amplitudes.transpose() * modes[m].site_amplitudes)(0);
      bio = std::max(bio, std::abs(o - (l == m ? 1.0 : 0.0)));
    }
  }
  expect(bio < 1e-10, "biorthonormality");

  // Completeness at t = 0.
  const ChainParams q = ChainParams::with_rate_ratio(6, 1.0, 0.4, 0.25, 0.05);
  const InitialState init = InitialState::uniform_superposition(6);
  const auto e = coherence_expansion(q, init);
  const Matrix rho0 = init.density_matrix(6).matrix();
  for (int j = 0; j < 6; ++j) {
    expect(std::abs(2.0 * e.u().col(j).sum().real() -
                    expectation(rho0, Observable::sigma_x(j))) < 1e-10,
           "completeness");
  }

  // Regression identity.
  const ChainParams r = ChainParams::with_rate_ratio(4, 1.0, 0.75, 0.3, 0.05);
  const TimeGrid taus{0.0, 0.5, 201};
  const Trajectory corr = two_time_correlation(r, {0, 1}, taus);
  Matrix x = Matrix::Zero(16, 16);
  x(0b0010, 0) = 1.0;
  double reg = 0.0;
  std::size_t i = 0;
  const auto re = corr.series("re_1_2");
  const auto im = corr.series("im_1_2");
  propagate(r, x, taus, {}, [&](double, const Matrix& m) {
    reg = std::max(reg, std::abs(cplx{re[i], im[i]} - lowering_expectation(m, 0)));
    ++i;
  });
  expect(reg < 1e-6, "regression identity");

  // Spectral sum rule.
  const ChainParams s = ChainParams::with_rate_ratio(4, 1.0, 0.2, 0.05, 0.05);
  std::vector<double> nu(200001);
  for (std::size_t k = 0; k < nu.size(); ++k) nu[k] = -20.0 + 40.0 * k / (nu.size() - 1);
  const auto density = correlation_spectrum(s, {0, 0}, nu);
  double integral = 0.0;
  for (std::size_t k = 1; k < nu.size(); ++k) {
    integral += 0.5 * (density.values[k] + density.values[k - 1]) * (nu[k] - nu[k - 1]);
  }
  expect(std::abs(integral - 0.5) < 0.01, "spectral sum rule");

  std::string detail = failed.empty() ? "all property checks hold" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail + "; unit suites cover the full property set"};
}

Outcome bose_hubbard() {
  const auto eff = effective_spin_params({4.0, 4.0, 40.0, 40.0, 40.0});
  const double rel = std::abs(std::abs(eff.lambda_eff) - 0.8) / 0.8;
  return {rel <= 1e-12, fmt("|lambda_eff| = %.15g kHz, relative error %.1e", std::abs(eff.lambda_eff), rel)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle-equivalence", 10.0, oracle_equivalence},
      {"spectrum-oracle", 5.0, spectrum_oracle},
      {"uniform-loss-contrast", 30.0, uniform_loss_contrast},
      {"region-points", 60.0, region_points},
      {"region-full-map", 600.0, full_map_runtime},
      {"band-clustering", 0.0, band_clustering},
      {"size-scaling", 1800.0, size_scaling},
      {"gamma-dependence", 0.0, gamma_dependence},
      {"property-suites", 0.0, property_suites},
      {"bose-hubbard", 0.0, bose_hubbard},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass;
    std::string timing = fmt("%.2f s", s);
    if (c.limit_s > 0.0) {
      timing += fmt(" (limit %.0f s)", c.limit_s);
      if (s > c.limit_s) pass = false;
    }
    if (!pass) ++failures;
    std::printf("%s  %-22s %s [%s]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
