#include <benchmark/benchmark.h>

#include "sinrsched/conflict_graph.hpp"
#include "sinrsched/generators.hpp"
#include "sinrsched/schedulers.hpp"
#include "sinrsched/sinr.hpp"

namespace {

using namespace sinrsched;

Instance Random(int n) {
  RandomConfig cfg;
  cfg.n = n;
  cfg.side = 5.0 * std::sqrt(static_cast<double>(n));
  cfg.min_length = 1;
  cfg.max_length = 16;
  cfg.seed = 7;
  return GenRandom(cfg);
}

void BM_BuildGraph(benchmark::State& state) {
  const Instance inst = Random(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(BuildGraph(inst, {1.5, 0.9}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGraph)->RangeMultiplier(2)->Range(64, 2048)->Complexity();

void BM_GreedyColor(benchmark::State& state) {
  const ConflictGraph g = BuildGraph(Random(static_cast<int>(state.range(0))), {1.5, 0.9});
  for (auto _ : state) benchmark::DoNotOptimize(GreedyColor(g));
}
BENCHMARK(BM_GreedyColor)->RangeMultiplier(4)->Range(64, 4096);

void BM_ScheduleConflict(benchmark::State& state) {
  const Instance inst = Random(static_cast<int>(state.range(0)));
  ConflictOptions opt;
  opt.gamma = 1.5;
  for (auto _ : state) benchmark::DoNotOptimize(ScheduleConflict(inst, opt));
}
BENCHMARK(BM_ScheduleConflict)->RangeMultiplier(4)->Range(64, 1024);

void BM_FirstFit(benchmark::State& state) {
  const Instance inst = Random(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(FirstFit(inst, 0.5));
}
BENCHMARK(BM_FirstFit)->RangeMultiplier(4)->Range(64, 1024);

void BM_FirstFitTree(benchmark::State& state) {
  const Instance inst = GenFirstFitTree(static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(FirstFit(inst, 0.0));
}
BENCHMARK(BM_FirstFitTree)->DenseRange(6, 12, 2);

void BM_CheckFeasible(benchmark::State& state) {
  const Instance inst = Random(static_cast<int>(state.range(0)));
  const PowerAssignment power = ObliviousPowers({0.5, 1.0}, inst);
  const LinkSet all = AllLinks(inst);
  for (auto _ : state) benchmark::DoNotOptimize(CheckFeasible(inst, all, power, 1.0));
}
BENCHMARK(BM_CheckFeasible)->RangeMultiplier(4)->Range(16, 1024);

void BM_ExistsPower(benchmark::State& state) {
  const Instance inst = Random(static_cast<int>(state.range(0)));
  const LinkSet all = AllLinks(inst);
  for (auto _ : state) benchmark::DoNotOptimize(ExistsPower(inst, all));
}
BENCHMARK(BM_ExistsPower)->RangeMultiplier(2)->Range(4, 64);

void BM_Randomized(benchmark::State& state) {
  const Instance inst = GenRandomizedTree(1, 5.0 / 3.0, 64, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RandomizedSchedule(inst, 0.0, ProbSequence::Constant(0.5, static_cast<int>(state.range(0))), 1));
  }
}
BENCHMARK(BM_Randomized)->Arg(100)->Arg(1000);

void BM_ExactMinSchedule(benchmark::State& state) {
  const Instance inst = Random(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ExactMinSchedule(inst, PowerMode::kFixed, 0.5));
}
BENCHMARK(BM_ExactMinSchedule)->DenseRange(6, 12, 3);

}  // namespace

BENCHMARK_MAIN();
