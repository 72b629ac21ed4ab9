#include <benchmark/benchmark.h>

#include "gsvdkit/gsvdkit.hpp"
#include "support/gen.hpp"

namespace {

using namespace gsvdkit;

void BM_Decompose(benchmark::State& state) {
  const Index n = state.range(0);
  SeededRng rng(1);
  const Matrix a = testing::gaussian(n + 5, n, rng);
  const Matrix b = testing::low_rank(n, n, n / 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(gsvd_decompose(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Decompose)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_TikhonovPath(benchmark::State& state) {
  const Index n = state.range(0);
  SeededRng rng(2);
  const TikhonovProblem prob{testing::gaussian(2 * n, n, rng), testing::gaussian(n - 1, n, rng),
                             testing::gaussian(2 * n, 1, rng).col(0)};
  const std::vector<double> grid{0.0, 0.01, 0.1, 1.0, 10.0, 100.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_path(prob, grid));
}
BENCHMARK(BM_TikhonovPath)->Arg(8)->Arg(32)->Arg(64);

void BM_TikhonovDirect(benchmark::State& state) {
  const Index n = state.range(0);
  SeededRng rng(2);
  const TikhonovProblem prob{testing::gaussian(2 * n, n, rng), testing::gaussian(n - 1, n, rng),
                             testing::gaussian(2 * n, 1, rng).col(0)};
  const std::vector<double> grid{0.0, 0.01, 0.1, 1.0, 10.0, 100.0};
  for (auto _ : state)
    for (double l : grid) benchmark::DoNotOptimize(direct_solve(prob, l));
}
BENCHMARK(BM_TikhonovDirect)->Arg(8)->Arg(32)->Arg(64);

void BM_ManovaSample(benchmark::State& state) {
  const JacobiParams params{state.range(0) + 2, state.range(0) + 4, state.range(0), 1.0};
  SeededRng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_manova(params, rng));
}
BENCHMARK(BM_ManovaSample)->Arg(1)->Arg(4)->Arg(16);

void BM_EmpiricalCheck(benchmark::State& state) {
  const JacobiParams params{3, 5, 1, 1.0};
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_check(params, 20000, SeededRng(4), threads));
}
BENCHMARK(BM_EmpiricalCheck)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
