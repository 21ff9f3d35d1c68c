#include <benchmark/benchmark.h>

#include "strobo/pipeline.hpp"

using namespace strobo;

namespace {

Scenario reference() { return parse_scenario(paper_defaults_json(), {"grid.pitch_mm=5"}); }

void BM_PlaneDesign(benchmark::State& state) {
  const Scenario s = reference();
  const TxCodebook cb = scenario_codebook(s);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_planes(s, cb));
}
BENCHMARK(BM_PlaneDesign)->Unit(benchmark::kMillisecond);

void BM_Synthesis(benchmark::State& state) {
  Scenario s = reference();
  s.sweeps = static_cast<std::size_t>(state.range(0));
  const TxCodebook cb = scenario_codebook(s);
  const auto planes = sweep_planes(s, cb);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s, cb, planes, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cb.size() * s.sweeps));
}
BENCHMARK(BM_Synthesis)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Backprojection(benchmark::State& state) {
  Scenario s = reference();
  s.signal.interpolation = state.range(0) ? Interpolation::lanczos : Interpolation::linear;
  const TxCodebook cb = scenario_codebook(s);
  const auto planes = sweep_planes(s, cb);
  const EchoCube cube = simulate(s, cb, planes, 1);
  const GridSpec grid = scenario_grid(s, cb, planes.front());
  for (auto _ : state) benchmark::DoNotOptimize(form_image(cube, s, grid, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size() * cube.snapshots()));
}
BENCHMARK(BM_Backprojection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Coverage(benchmark::State& state) {
  const Scenario s = reference();
  const TxCodebook cb = scenario_codebook(s);
  const auto planes = sweep_planes(s, cb);
  const Vec2 r = s.targets.front().position;
  const auto sets = illuminated_atom_sets(s.scene, s.source, planes.front(), cb, 1, r,
                                          -std::numeric_limits<double>::infinity());
  CoverageOptions o;
  o.all_pairs = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coverage(r, sets, s.source.carrier, s.source.bandwidth, o));
  }
}
BENCHMARK(BM_Coverage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
