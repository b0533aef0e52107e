#include <random>

#include <benchmark/benchmark.h>

#include "bwc/bwc_mp.hpp"
#include "bwc/bwc_sp.hpp"
#include "bwc/instances.hpp"
#include "bwc/mdp_analysis.hpp"
#include "bwc/simulate.hpp"
#include "bwc/verify.hpp"

using namespace bwc;

namespace {

Digraph random_digraph(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Digraph d;
  d.nodes = n;
  for (std::uint32_t v = 0; v < n; ++v) {
    d.arcs.push_back({v, static_cast<std::uint32_t>((v + 1) % n), static_cast<Weight>(rng() % 21) - 10});
    for (int k = 0; k < 3; ++k)
      d.arcs.push_back({v, static_cast<std::uint32_t>(rng() % n), static_cast<Weight>(rng() % 21) - 10});
  }
  return d;
}

void BM_Karp(benchmark::State& st) {
  Digraph d = random_digraph(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(karp_min_mean_cycle(d));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Karp)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_Howard(benchmark::State& st) {
  Digraph d = random_digraph(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(howard_min_mean_cycle(d));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Howard)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_DecideRandomMp(benchmark::State& st) {
  RandomSpec spec;
  spec.seed = 3;
  spec.states = static_cast<std::uint32_t>(st.range(0));
  spec.density = 4.0 / static_cast<double>(spec.states);
  BwcInstance inst = gen_random(spec);
  for (auto _ : st) benchmark::DoNotOptimize(decide(inst));
}
BENCHMARK(BM_DecideRandomMp)->RangeMultiplier(2)->Range(8, 128);

void BM_Fig2Synthesis(benchmark::State& st) {
  BwcInstance f2 = gen_fig2();
  for (auto _ : st) benchmark::DoNotOptimize(solve_mp(f2, true));
}
BENCHMARK(BM_Fig2Synthesis)->Unit(benchmark::kMillisecond);

void BM_Fig6Synthesis(benchmark::State& st) {
  BwcInstance f6 = gen_fig6(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(solve_mp(f6, true));
}
BENCHMARK(BM_Fig6Synthesis)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SpFamily(benchmark::State& st) {
  BwcInstance f7 = gen_sp_family(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sp_decide_and_synthesize(f7));
}
BENCHMARK(BM_SpFamily)->Arg(13)->Arg(53)->Arg(213)->Arg(853);

void BM_KthReduction(benchmark::State& st) {
  KthSubsetInstance k;
  for (int i = 0; i < st.range(0); ++i) k.sizes.push_back(1 + i % 4);
  k.K = 3;
  k.L = 4;
  BwcInstance inst = reduce_kth_subset(k);
  for (auto _ : st) benchmark::DoNotOptimize(sp_decide_and_synthesize(inst, false));
}
BENCHMARK(BM_KthReduction)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_SimulateFig4(benchmark::State& st) {
  BwcInstance f4 = gen_fig4();
  TableMachine s = fig4_combined_strategy(f4);
  SimulationOptions opt;
  opt.runs = 1000;
  opt.horizon = 1000;
  for (auto _ : st) benchmark::DoNotOptimize(simulate(f4.game, s, f4.model, opt));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(opt.runs * opt.horizon));
}
BENCHMARK(BM_SimulateFig4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
