#include <benchmark/benchmark.h>

#include "tcpp/densities.hpp"
#include "tcpp/samplers.hpp"
#include "tcpp/specfun.hpp"
#include "tcpp/timechange.hpp"
#include "tcpp/verify.hpp"

using namespace tcpp;

static void BM_BesselK(benchmark::State& state) {
  double w = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::bessel_k(1.3, w));
    w = w < 20.0 ? w * 1.01 : 0.5;
  }
}
BENCHMARK(BM_BesselK);

static void BM_PmfBessel(benchmark::State& state) {
  const auto kmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pmf_table_bessel(1.0, 1.0, 2.0, 3.0, kmax));
}
BENCHMARK(BM_PmfBessel)->Arg(10)->Arg(100);

static void BM_PmfQuadrature(benchmark::State& state) {
  const auto spec = SubordinatorSpec::tempered(0.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(pmf_table_quadrature(spec, 2.0, 1.0, 20));
}
BENCHMARK(BM_PmfQuadrature)->Unit(benchmark::kMillisecond);

static void BM_StableDensity(benchmark::State& state) {
  const double beta = static_cast<double>(state.range(0)) / 100.0;
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stable_density(x, 1.0, beta));
    x = x < 50.0 ? x * 1.05 : 0.1;
  }
}
BENCHMARK(BM_StableDensity)->Arg(25)->Arg(50)->Arg(70);

static void BM_SampleInverseStable(benchmark::State& state) {
  const auto spec = SubordinatorSpec::inverse(SubordinatorSpec::stable(0.5));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample(spec, 1.0, 1000, seed++));
}
BENCHMARK(BM_SampleInverseStable)->Unit(benchmark::kMillisecond);

static void BM_CheckEquation(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify::check_equation("prop2.1", {}, verify::GridSpec{}));
}
BENCHMARK(BM_CheckEquation)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
