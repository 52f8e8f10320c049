#include <benchmark/benchmark.h>

#include <vector>

#include "rwrs/green_kernel.hpp"
#include "rwrs/lattice_walk.hpp"
#include "rwrs/silt.hpp"

using namespace rwrs;

static void walk_steps(benchmark::State& state) {
  WalkStepper w(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(w.step());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(walk_steps)->Arg(3)->Arg(5)->Arg(10);

static void local_time_field(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_local_times(5, state.range(0), ++seed).range());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(local_time_field)->Arg(1 << 12)->Arg(1 << 16);

static void silt_by_sorting(benchmark::State& state) {
  Trajectory t = simulate_walk(5, state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(silt_sorted(t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(silt_by_sorting)->Arg(1 << 12)->Arg(1 << 16);

static void silt_by_hashing(benchmark::State& state) {
  Trajectory t = simulate_walk(5, state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(silt(local_times(t)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(silt_by_hashing)->Arg(1 << 12)->Arg(1 << 16);

static void origin_jump_ahead(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(origin_local_time(5, state.range(0), ++seed));
}
BENCHMARK(origin_jump_ahead)->Arg(10000)->Arg(1000000);

static void intersection(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_walk_intersection(5, state.range(0), seed, seed + 1));
    seed += 2;
  }
}
BENCHMARK(intersection)->Arg(10000);

static void green_origin(benchmark::State& state) {
  std::vector<Coord> x(static_cast<std::size_t>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(green_value(static_cast<int>(state.range(0)), x).value);
}
BENCHMARK(green_origin)->Arg(3)->Arg(5);
BENCHMARK_MAIN();
