#include <benchmark/benchmark.h>

#include "treexp/adversary.hpp"
#include "treexp/generators.hpp"
#include "treexp/opt_oracle.hpp"
#include "treexp/strategies.hpp"

using namespace treexp;

namespace {

void run_known(benchmark::State& state, StrategyKind kind, const Instance& inst) {
  for (auto _ : state) {
    KnownTreeSource src(inst.tree);
    Exploration s(src, inst.agents, inst.budget);
    auto run = run_strategy(kind, s, 1);
    benchmark::DoNotOptimize(run.explored_with_root);
  }
}

void BM_DivideExploreTightness(benchmark::State& state) {
  auto k = static_cast<std::uint32_t>(state.range(0));
  run_known(state, StrategyKind::DivideExplore, gen_tightness(k, k));
}
BENCHMARK(BM_DivideExploreTightness)->Arg(8)->Arg(32)->Arg(100);

void BM_RandomTree(benchmark::State& state, StrategyKind kind) {
  Instance inst{gen_random(static_cast<std::uint32_t>(state.range(0)), 0, 7), 8, 64};
  run_known(state, kind, inst);
}
BENCHMARK_CAPTURE(BM_RandomTree, dnd, StrategyKind::DivideExplore)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(BM_RandomTree, greedy, StrategyKind::GreedyNearest)->Arg(1000)->Arg(10000);

void BM_OptExact(benchmark::State& state) {
  Instance inst{gen_random(static_cast<std::uint32_t>(state.range(0)), 0, 3), 2, 6};
  for (auto _ : state) benchmark::DoNotOptimize(opt_exact(inst));
}
BENCHMARK(BM_OptExact)->Arg(12)->Arg(16);

void BM_LowerBoundAdversary(benchmark::State& state) {
  LBParams p = state.range(0) == 2 ? lb_params(2, 1024, 260) : lb_params(4, 4096, 1048);
  for (auto _ : state) {
    LowerBoundAdversary adv(p);
    Exploration s(adv, static_cast<std::uint32_t>(p.agents()), static_cast<std::uint32_t>(p.budget));
    auto run = run_strategy(StrategyKind::DivideExplore, s, 1);
    benchmark::DoNotOptimize(finalize_lb(adv, s).t);
  }
}
BENCHMARK(BM_LowerBoundAdversary)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
