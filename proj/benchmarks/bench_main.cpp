#include <random>

#include <benchmark/benchmark.h>

#include "datasets.hpp"
#include "latfit/approx1d.hpp"
#include "latfit/approxnd.hpp"
#include "latfit/lll.hpp"

namespace {

using namespace latfit;

Matrix random_basis(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix b(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) b(i, j) = u(rng);
  }
  return b;
}

void BM_LllDouble(benchmark::State& state) {
  const Matrix b = random_basis(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lll_reduce(b));
}
BENCHMARK(BM_LllDouble)->DenseRange(2, 10, 2);

void BM_LllExtended(benchmark::State& state) {
  const Matrix b = random_basis(static_cast<std::size_t>(state.range(0)), 1);
  ReductionParams p;
  p.precision_digits = 20;
  for (auto _ : state) benchmark::DoNotOptimize(lll_reduce(b, p));
}
BENCHMARK(BM_LllExtended)->DenseRange(2, 10, 2);

void BM_Approximate1D(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(approximate_1d(v, 1e-4));
}
BENCHMARK(BM_Approximate1D)->Arg(6)->Arg(10)->Arg(20);

void BM_ApproximateGeneral(benchmark::State& state) {
  const PointSet ps = testdata::permuted_points();
  for (auto _ : state) benchmark::DoNotOptimize(approximate_general(ps, 1e-3));
}
BENCHMARK(BM_ApproximateGeneral);

void BM_SweepTwentyDigits(benchmark::State& state) {
  const PointSet ps = testdata::permuted_points();
  GeneralOptions opt;
  opt.precision = Precision::twenty_digits();
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(epsilon_sweep(ps, decade_range(-2, -10), opt, parallel));
  }
}
BENCHMARK(BM_SweepTwentyDigits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
