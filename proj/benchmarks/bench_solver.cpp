#include <benchmark/benchmark.h>

#include "dynasty/dp_solver.hpp"
#include "dynasty/scenario.hpp"
#include "dynasty/static_solver.hpp"
#include "dynasty/utility.hpp"

using namespace dynasty;

static void BM_StopValue(benchmark::State& state) {
  const Household h{10.0, 350.0};
  const auto r = Calibration::belief().regime(Model::M4b);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_stop_value({1, 2}, h, r));
}
BENCHMARK(BM_StopValue);

static void BM_SolveDp(benchmark::State& state) {
  const Household h{10.0, 350.0};
  auto r = Calibration::belief().regime(Model::M4b);
  r.n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dp(h, r).root_value());
}
BENCHMARK(BM_SolveDp)->DenseRange(1, 4);

static void BM_Oracle(benchmark::State& state) {
  const Household h{10.0, 350.0};
  auto r = Calibration::belief().regime(Model::M4b);
  r.n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_policies_oracle(h, r).best_value);
}
BENCHMARK(BM_Oracle)->DenseRange(1, 4);

static void BM_RationalThreshold(benchmark::State& state) {
  const auto r = Calibration::reality().regime(Model::M1);
  for (auto _ : state) benchmark::DoNotOptimize(rational_threshold({6.0, 200.0}, r));
}
BENCHMARK(BM_RationalThreshold);

static void BM_Fig3Grid(benchmark::State& state) {
  const auto cfg = make_scenario("fig3");
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_heatmap(cfg, jobs).cells.size());
}
BENCHMARK(BM_Fig3Grid)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const Household h{6.0, 200.0};
  const auto r = Calibration::belief().regime(Model::M4b);
  const ChildPlan plan{90.0, 46.0, FamilyState{1, 1}};
  const auto draws = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_expected_utility(plan, r, h, draws, 1).estimate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
