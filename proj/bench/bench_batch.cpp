// Serial reference versus OpenMP batch runners on the same job lists.
#include <benchmark/benchmark.h>

#include <vector>

#include "legwave/batch.hpp"
#include "legwave/control.hpp"

using namespace legwave;

namespace {

std::vector<WalkJob> jobs(int seeds) {
  std::vector<WalkJob> out;
  for (double r : {0.0, 0.17, 0.32})
    for (double a : {0.0, 10.0, 20.0})
      for (int s = 1; s <= seeds; ++s) out.push_back({r, a, static_cast<std::uint64_t>(s), nullptr});
  return out;
}

void walks(benchmark::State& state, Exec exec) {
  WalkSetup setup;
  setup.cycles = 10;
  const auto js = jobs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_walks(setup, js, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(js.size()));
}

void controllers(benchmark::State& state, Exec exec) {
  WalkSetup setup;
  setup.cycles = 7;
  std::vector<std::uint64_t> seeds;
  for (int s = 1; s <= state.range(0); ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  const std::vector<int> every{1, 2, 3};
  const auto scenarios = modulation_sweep(ControllerConfig{}, 0.32, every);
  for (auto _ : state) benchmark::DoNotOptimize(compare_controllers(setup, scenarios, seeds, exec));
}

void sweep(benchmark::State& state, Exec exec) {
  std::vector<ModelSweepInput> terrains;
  for (int i = 0; i < 8; ++i) terrains.push_back({0.05 * i, HeightDeltaModel::from_rugosity(0.05 * i)});
  std::vector<double> grid;
  for (int a = 0; a <= 30; ++a) grid.push_back(a);
  for (auto _ : state)
    benchmark::DoNotOptimize(model_sweep(GaitConfig{}, RobotGeometry{}, terrains, grid, 64, 36,
                                         kForceVelocityCoeff, exec));
}

}  // namespace

BENCHMARK_CAPTURE(walks, serial, Exec::serial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(walks, parallel, Exec::parallel)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(controllers, serial, Exec::serial)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(controllers, parallel, Exec::parallel)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(sweep, serial, Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, parallel, Exec::parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
