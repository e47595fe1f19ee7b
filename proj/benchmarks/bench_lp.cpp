#include <benchmark/benchmark.h>

#include "common.hpp"
#include "optauction/auction_lp.hpp"

using namespace optauction;

static void BM_SolveLp1(benchmark::State& state) {
  const Instance inst = bench::ramp_instance(state.range(0), state.range(1));
  const AuctionLp lp = build_lp1(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(lp.program));
  }
}
BENCHMARK(BM_SolveLp1)->Args({1, 4})->Args({1, 8})->Args({2, 3})->Args({2, 4})->Args({3, 3})
    ->Unit(benchmark::kMillisecond);

static void BM_SolveLp2(benchmark::State& state) {
  const Instance inst = bench::ramp_instance(state.range(0), state.range(1));
  const AuctionLp lp = build_lp2(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(lp.program));
  }
}
BENCHMARK(BM_SolveLp2)->Args({2, 3})->Args({2, 4})->Args({3, 3})->Unit(benchmark::kMillisecond);
