#include <benchmark/benchmark.h>

#include "common.hpp"
#include "optauction/flow_tree.hpp"
#include "optauction/kkt.hpp"
#include "optauction/polyhedral.hpp"
#include "optauction/single_item.hpp"
#include "optauction/truthfulness.hpp"

using namespace optauction;

static void BM_OptimalAuction(benchmark::State& state) {
  const Instance inst = bench::ramp_instance(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_optimal_auction(inst, 1));
  }
  state.counters["profiles"] = static_cast<double>(inst.profiles().size());
}
BENCHMARK(BM_OptimalAuction)->Args({2, 4})->Args({3, 4})->Args({4, 4})->Args({3, 8})
    ->Unit(benchmark::kMicrosecond);

static void BM_GeneralAuctionUnits(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const Instance inst = bench::ramp_instance(n, 4);
  const FeasibilitySpec spec = FeasibilitySpec::units(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_general_auction(inst, 1, spec));
  }
}
BENCHMARK(BM_GeneralAuctionUnits)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_CheckDsic(benchmark::State& state) {
  const Instance inst = bench::ramp_instance(state.range(0), 4);
  const AuctionTable table = build_optimal_auction(inst, 1);
  const auto mode = state.range(1) ? CheckMode::kFull : CheckMode::kLocal;
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_dsic(inst, table, mode));
  }
}
BENCHMARK(BM_CheckDsic)->Args({3, 0})->Args({3, 1})->Args({4, 0})->Args({4, 1})
    ->Unit(benchmark::kMicrosecond);

static void BM_TotalUnimodularity(benchmark::State& state) {
  const Instance inst = bench::ramp_instance(state.range(0), state.range(1));
  const ConstraintMatrix m = build_allocation_matrix(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_totally_unimodular(m));
  }
}
BENCHMARK(BM_TotalUnimodularity)->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMillisecond);

static void BM_FlowAuction(benchmark::State& state) {
  // A path of `edges` unit edges; bidder i routes over edges [i % edges, edges).
  const std::size_t edges = state.range(0);
  std::vector<FlowEdge> e;
  for (std::size_t j = 0; j < edges; ++j) e.push_back({j, j + 1, Rational(1)});
  std::vector<FlowBidder> b;
  for (std::size_t i = 0; i < 4; ++i) {
    b.push_back({i % edges, edges, Rational(1, 2), bench::ramp_prior(3)});
  }
  const FlowInstance inst(edges + 1, e, b, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_flow_auction(inst));
  }
}
BENCHMARK(BM_FlowAuction)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
