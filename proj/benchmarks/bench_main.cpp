#include <benchmark/benchmark.h>

#include <memory>

#include "pfaffinc/cutting.hpp"
#include "pfaffinc/generators.hpp"
#include "pfaffinc/incidence.hpp"
#include "pfaffinc/intersect.hpp"
#include "pfaffinc/scene.hpp"

using namespace pfaffinc;

namespace {

void BM_IntersectCirclePairs(benchmark::State& state) {
  const Scene s = unit_circles(0, static_cast<int>(state.range(0)), 3);
  const auto curves = prepare_scene(s);
  for (auto _ : state) {
    std::size_t points = 0;
    for (std::size_t i = 0; i < curves.size(); ++i)
      for (std::size_t j = i + 1; j < curves.size(); ++j) points += intersect_curves(curves[i], curves[j]).size();
    benchmark::DoNotOptimize(points);
  }
}
BENCHMARK(BM_IntersectCirclePairs)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_BruteForceCount(benchmark::State& state) {
  const int a = static_cast<int>(state.range(0));
  const Scene s = grid_lines(a, a);
  const auto curves = prepare_scene(s);
  for (auto _ : state) benchmark::DoNotOptimize(count_incidences(s.points, curves).size());
  state.counters["m"] = static_cast<double>(s.points.size());
  state.counters["n"] = static_cast<double>(s.curves.size());
}
BENCHMARK(BM_BruteForceCount)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BuildCutting(benchmark::State& state) {
  const Scene s = grid_lines(4, 5);
  auto curves = std::make_shared<const std::vector<PreparedCurve>>(prepare_scene(s));
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_cutting(curves, r, 11).cells.size());
}
BENCHMARK(BM_BuildCutting)->Arg(2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CountViaCutting(benchmark::State& state) {
  const Scene s = random_scene(default_random_kinds(), 300, 100, 0.5, 21);
  auto curves = std::make_shared<const std::vector<PreparedCurve>>(prepare_scene(s));
  const Cutting cut = build_cutting(curves, static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(count_via_cutting(s.points, *curves, cut).total);
}
BENCHMARK(BM_CountViaCutting)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_KstFree(benchmark::State& state) {
  const Scene s = grid_lines(4, 4);
  const auto g = count_incidences(s);
  for (auto _ : state) benchmark::DoNotOptimize(kst_free(g, 2, 2));
}
BENCHMARK(BM_KstFree);

}  // namespace

BENCHMARK_MAIN();
