#include <benchmark/benchmark.h>

#include "common.hpp"
#include "optauction/virtuals.hpp"

using namespace optauction;

static void BM_IronedSchedule(benchmark::State& state) {
  const DiscretePrior prior = bench::ramp_prior(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ironed_schedule(prior, 1));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IronedSchedule)->RangeMultiplier(4)->Range(4, 1024)->Complexity();
