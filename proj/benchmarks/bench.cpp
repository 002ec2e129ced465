#include <random>

#include <benchmark/benchmark.h>

#include "dimersync/lindblad.hpp"
#include "dimersync/spectrum.hpp"
#include "dimersync/sweep.hpp"
#include "dimersync/sync_metrics.hpp"

using namespace dimersync;

namespace {

void BM_LiouvillianApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChainParams p(n, 1.0, 0.2, 0.3, 0.05, 0.01);
  const LindbladGenerator gen(p);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const auto dim = static_cast<Eigen::Index>(p.dim());
  Matrix rho(dim, dim);
  for (Eigen::Index i = 0; i < rho.size(); ++i) rho.data()[i] = {g(rng), g(rng)};
  Matrix out(dim, dim);
  for (auto _ : state) {
    gen.apply(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LiouvillianApply)->Arg(4)->Arg(6)->Arg(8);

void BM_AnalyticSpectrum(benchmark::State& state) {
  const ChainParams p(static_cast<int>(state.range(0)), 1.0, 0.2, 0.3, 0.05, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_spectrum(p));
}
BENCHMARK(BM_AnalyticSpectrum)->Arg(4)->Arg(8)->Arg(12);

void BM_PearsonDelayScan(benchmark::State& state) {
  const TimeGrid grid{0.0, 0.1, 2000};
  std::vector<double> x(grid.count), y(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    x[i] = std::cos(0.7 * grid.at(i));
    y[i] = std::sin(0.7 * grid.at(i) + 0.3);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson_max_delay(x, y, grid, {0.0, 80.0}, 9.0));
  }
}
BENCHMARK(BM_PearsonDelayScan);

void BM_MapCell(benchmark::State& state) {
  SweepConfig c;
  const ChainParams p = c.base_params();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_point(c, p));
}
BENCHMARK(BM_MapCell);

}  // namespace

BENCHMARK_MAIN();
