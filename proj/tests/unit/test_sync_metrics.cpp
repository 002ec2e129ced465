#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dimersync/error.hpp"
#include "dimersync/sync_metrics.hpp"

using namespace dimersync;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const TimeGrid& grid, auto&& f) {
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) out[i] = f(grid.at(i));
  return out;
}

}  // namespace

TEST(Pearson, IdenticalAndOpposite) {
  const TimeGrid grid{0.0, 0.05, 401};
  const auto x = sample(grid, [](double t) { return std::sin(1.3 * t) + 0.2 * t; });
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  EXPECT_NEAR(pearson(x, x, grid, {0.0, 20.0}).value, 1.0, 1e-12);
  EXPECT_NEAR(pearson(x, neg, grid, {0.0, 20.0}).value, -1.0, 1e-12);
}

TEST(Pearson, PhaseShiftedSinusoids) {
  const double w = 2.0;
  const double period = 2.0 * kPi / w;
  const TimeGrid grid{0.0, period / 2000.0, 20001};
  for (double phi : {0.3, 1.1, 2.0, 2.9}) {
    const auto a = sample(grid, [&](double t) { return std::sin(w * t); });
    const auto b = sample(grid, [&](double t) { return std::sin(w * t + phi); });
    EXPECT_NEAR(pearson(a, b, grid, {0.0, 10.0 * period}).value, std::cos(phi), 1e-6);
  }
}

TEST(Pearson, InvariantUnderAffineMapsAndSymmetric) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const TimeGrid grid{0.0, 0.1, 300};
  std::vector<double> x(grid.count), y(grid.count), z(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    x[i] = g(rng);
    y[i] = 0.5 * x[i] + g(rng);
    z[i] = 3.7 * y[i] - 12.0;
  }
  const Window w{1.0, 25.0};
  const double r = pearson(x, y, grid, w).value;
  EXPECT_NEAR(pearson(x, z, grid, w).value, r, 1e-10);
  EXPECT_NEAR(pearson(y, x, grid, w).value, r, 1e-15);
  EXPECT_LE(std::abs(r), 1.0);
}

TEST(Pearson, ConstantSignalIsUndefined) {
  const TimeGrid grid{0.0, 0.1, 200};
  const std::vector<double> flat(grid.count, 0.25);
  const auto x = sample(grid, [](double t) { return std::cos(t); });
  const auto r = pearson(x, flat, grid, {0.0, 10.0});
  EXPECT_FALSE(r.defined);
  EXPECT_EQ(r.value, 0.0);
}

TEST(Pearson, WindowValidation) {
  const TimeGrid grid{0.0, 0.1, 100};
  const auto x = sample(grid, [](double t) { return std::cos(t); });
  EXPECT_THROW((void)pearson(x, x, grid, {0.0, 0.5}), ConfigError);
  EXPECT_THROW((void)pearson(x, x, grid, {5.0, 8.0}), ConfigError);
  EXPECT_THROW((void)pearson(x, x, grid, {-1.0, 2.0}), ConfigError);
  EXPECT_NO_THROW((void)pearson(x, x, grid, {0.0, 9.9}));
}

TEST(PearsonMaxDelay, QuarterPeriodAlignsSineAndCosine) {
  const double w = 1.0;
  const double period = 2.0 * kPi / w;
  const TimeGrid grid{0.0, period / 400.0, 4001};
  const auto c = sample(grid, [&](double t) { return std::cos(w * t); });
  const auto s = sample(grid, [&](double t) { return std::sin(w * t); });
  const Window win{0.0, 4.0 * period};
  EXPECT_NEAR(pearson(c, s, grid, win).value, 0.0, 1e-6);
  const auto r = pearson_max_delay(s, c, grid, win, period);
  EXPECT_NEAR(r.c_max_delay, 1.0, 1e-6);
  EXPECT_NEAR(r.tau_star, 0.75 * period, grid.step);
  EXPECT_TRUE(r.defined);
}

TEST(PearsonMaxDelay, NonDecreasingInDelayRange) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const TimeGrid grid{0.0, 0.1, 600};
  std::vector<double> x(grid.count), y(grid.count);
  for (auto& v : x) v = g(rng);
  for (auto& v : y) v = g(rng);
  double previous = -2.0;
  for (double tau : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto r = pearson_max_delay(x, y, grid, {0.0, 40.0}, tau);
    EXPECT_GE(r.c_max_delay, previous);
    EXPECT_GE(r.c_max_delay, r.c_value);
    previous = r.c_max_delay;
  }
  EXPECT_THROW((void)pearson_max_delay(x, y, grid, {0.0, 40.0}, 30.0), ConfigError);
}

TEST(GlobalSync, SingleSlowModeFamilyIsSynchronized) {
  const double nu = 0.8;
  const double period = 2.0 * kPi / nu;
  const TimeGrid grid{0.0, period / 200.0, 4000};
  const double phases[] = {0.0, 1.3, 2.5, 4.0};
  const double amps[] = {1.0, -0.4, 2.2, 0.7};
  Eigen::MatrixXd rows(4, static_cast<Eigen::Index>(grid.count));
  for (int j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double t = grid.at(i);
      rows(j, static_cast<Eigen::Index>(i)) =
          amps[j] * std::exp(-0.01 * t) * std::cos(nu * t + phases[j]);
    }
  }
  const auto g = global_sync(rows, grid, {0.0, 5.0 * period}, period);
  EXPECT_NEAR(g.c_t, 1.0, 1e-3);
  EXPECT_EQ(g.pairs.size(), 6u);
  EXPECT_EQ(g.undefined_pairs, 0);
}

TEST(GlobalSync, ProductOverPairs) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> gauss;
  const TimeGrid grid{0.0, 0.1, 400};
  Eigen::MatrixXd rows(4, static_cast<Eigen::Index>(grid.count));
  for (Eigen::Index j = 0; j < 4; ++j) {
    for (Eigen::Index i = 0; i < rows.cols(); ++i) rows(j, i) = gauss(rng);
  }
  const auto g = global_sync(rows, grid, {0.0, 20.0}, 3.0);
  double product = 1.0;
  for (const auto& p : g.pairs) {
    product *= p.c_max_delay;
    EXPECT_DOUBLE_EQ(g.pair_matrix(p.i, p.j), p.c_max_delay);
    EXPECT_DOUBLE_EQ(g.pair_matrix(p.j, p.i), p.c_max_delay);
  }
  EXPECT_DOUBLE_EQ(g.c_t, product);
  EXPECT_EQ(g.pair_matrix(2, 2), 1.0);
}

TEST(GlobalSync, DecayedSiteZeroesTheProduct) {
  const TimeGrid grid{0.0, 0.1, 400};
  Eigen::MatrixXd rows(3, static_cast<Eigen::Index>(grid.count));
  for (Eigen::Index i = 0; i < rows.cols(); ++i) {
    const double t = grid.at(static_cast<std::size_t>(i));
    rows(0, i) = std::cos(t);
    rows(1, i) = std::sin(t);
    rows(2, i) = 0.0;
  }
  const auto g = global_sync(rows, grid, {0.0, 20.0}, 6.0);
  EXPECT_EQ(g.c_t, 0.0);
  EXPECT_EQ(g.undefined_pairs, 2);
  EXPECT_TRUE(g.flagged());
}

TEST(GlobalSync, ReadsTrajectorySeries) {
  const TimeGrid grid{0.0, 0.1, 400};
  Trajectory t(grid);
  t.add("sx_1", sample(grid, [](double x) { return std::cos(x); }));
  t.add("sx_2", sample(grid, [](double x) { return std::cos(x + 0.4); }));
  const auto g = global_sync(t, 2, {0.0, 20.0}, 0.0);
  EXPECT_DOUBLE_EQ(g.c_t, pearson(t.series("sx_1"), t.series("sx_2"), grid,
                                  {0.0, 20.0}).value);
  EXPECT_THROW((void)global_sync(t, 3, {0.0, 20.0}, 0.0), ConfigError);
}
