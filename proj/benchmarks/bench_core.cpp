#include <benchmark/benchmark.h>

#include <vector>

#include "kresling/cycle.hpp"
#include "kresling/gait.hpp"
#include "kresling/kinematics.hpp"
#include "kresling/landscape.hpp"

namespace {

using namespace kresling;

ModuleConfig reference_module() {
  ModuleConfig c;
  c.segments = {{8, 30.0, 0.8, 15.0}, {8, 30.0, 0.6, 5.0}};
  return c;
}

void BM_SegmentEnergy(benchmark::State& state) {
  const Segment seg(KreslingDesign{8, 30.0, 0.8, 15.0});
  const double lo = seg.window().lo;
  const double span = seg.window().hi - lo;
  double l = lo;
  for (auto _ : state) {
    l += 0.001 * span;
    if (l >= lo + span) l = lo;
    benchmark::DoNotOptimize(seg.energy(l));
  }
}
BENCHMARK(BM_SegmentEnergy);

void BM_SegmentCurvature(benchmark::State& state) {
  const Segment seg(KreslingDesign{8, 30.0, 0.8, 15.0});
  const double l = 0.5 * (seg.l_contracted() + seg.l_extended());
  for (auto _ : state) benchmark::DoNotOptimize(seg.curvature(l));
}
BENCHMARK(BM_SegmentCurvature);

void BM_StretchPath(benchmark::State& state) {
  const DrivingModule module(reference_module());
  for (auto _ : state) {
    auto path = equilibrium_path(module, Direction::stretch);
    benchmark::DoNotOptimize(path.steps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(module.lt_grid().size()));
}
BENCHMARK(BM_StretchPath)->Unit(benchmark::kMillisecond);

void BM_BruteForceMinima(benchmark::State& state) {
  const DrivingModule module(reference_module());
  const double lt = 0.5 * (module.lt_min() + module.lt_max());
  const double res = 0.01 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_minima(module, lt, res));
}
BENCHMARK(BM_BruteForceMinima)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

// One cell of the parametric study: paths, cycle, anchors and gait.
void BM_SweepCell(benchmark::State& state) {
  const DrivingModule module(reference_module());
  for (auto _ : state) {
    const auto stretch = equilibrium_path(module, Direction::stretch);
    const auto compress = equilibrium_path(module, Direction::compress);
    const auto cycle = build_cycle(stretch, compress);
    const auto anchors = size_anchors(module, cycle, 47.5);
    benchmark::DoNotOptimize(gait_length(simulate(module, stretch, compress, anchors)));
  }
}
BENCHMARK(BM_SweepCell)->Unit(benchmark::kMillisecond);

}  // namespace

// The distro benchmark_main archive carries LTO bytecode from another
// compiler release, so the entry point is generated here.
BENCHMARK_MAIN();
