// Fast kernel vs the literal pipeline, and serial vs OpenMP over the 16 settings.

#include <benchmark/benchmark.h>

#include "bellgate/experiment.hpp"
#include "bellgate/reference.hpp"

using namespace bellgate;

namespace {

RunPlan bench_plan(bool rotation, double seconds) {
  RunPlan p;
  p.apparatus = bench_apparatus();
  p.detector = bench_detectors();
  p.model = {QuantumState{SignConvention::mirrored, 0.82}};
  p.pair_rate = 32594.0 * 19729.0 / 388.92;
  p.rotation = rotation;
  p.integration_time_per_setting = seconds;
  return p;
}

void BM_reference_setting(benchmark::State& state) {
  const auto ctx = SimulationContext::from(bench_plan(state.range(0) != 0, 0.1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(reference_setting(ctx, Setting{0.0, 22.5}, ++seed));
  state.SetLabel(state.range(0) ? "rotation" : "static");
}

void BM_fast_setting(benchmark::State& state) {
  const auto ctx = SimulationContext::from(bench_plan(state.range(0) != 0, 0.1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_setting(ctx, Setting{0.0, 22.5}, ++seed));
  state.SetLabel(state.range(0) ? "rotation" : "static");
}

void BM_run_settings(benchmark::State& state) {
  const auto plan = bench_plan(false, 1.0);
  const auto exec = state.range(0) ? Execution::parallel : Execution::serial;
  for (auto _ : state) benchmark::DoNotOptimize(run_settings(plan, exec));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_reference_setting)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fast_setting)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_run_settings)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
