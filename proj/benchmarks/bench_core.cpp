#include <benchmark/benchmark.h>

#include <vector>

#include "stagavg/stagavg.hpp"

using namespace stagavg;

static void BM_Philox(benchmark::State& state) {
  RandomSource src(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(src());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

static void BM_Uniform(benchmark::State& state) {
  RandomSource src(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(src.uniform(-1.0, 1.0));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Uniform);

static void BM_AveragerAbsorb(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Point w(dim, 1.0);
  AveragerState st;
  std::uint64_t t = 0;
  for (auto _ : state) {
    averager_absorb(st, t++, w.coords());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AveragerAbsorb)->Arg(1)->Arg(100);

static void BM_Run(benchmark::State& state, Problem p, Variant v) {
  AlgorithmConfig cfg;
  cfg.variant = v;
  cfg.alpha = 1e-3;
  cfg.horizon = static_cast<std::uint64_t>(state.range(0));
  const auto sched = sampling_schedule(10);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RandomSource src(seed++, 0);
    benchmark::DoNotOptimize(run(p, cfg, src, sched));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Run, l1_staggered, make_l1(100, 4.0), Variant::staggered)->Arg(1 << 14);
BENCHMARK_CAPTURE(BM_Run, l1_polynomial, make_l1(100, 4.0), Variant::polynomial_decay)
    ->Arg(1 << 14);
BENCHMARK_CAPTURE(BM_Run, asym_staggered, make_asymmetric(100, 4.0), Variant::staggered)
    ->Arg(1 << 14);
BENCHMARK_CAPTURE(BM_Run, deadzone_constant, make_deadzone(100, 4.0, 1e-6),
                  Variant::constant_last_iterate)
    ->Arg(1 << 14);

static void BM_PolyhedralConstants(benchmark::State& state) {
  double g = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(polyhedral_constants(g, 1.0));
    g = g < 100.0 ? g + 1.0 : 1.0;
  }
}
BENCHMARK(BM_PolyhedralConstants);
BENCHMARK_MAIN();
