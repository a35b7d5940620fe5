#include <benchmark/benchmark.h>

#include "dgife/mesh.hpp"

namespace {

dgife::EllipseCurve study_curve() {
  const double a = 3.14159265358979323846 / 6.28;
  return dgife::EllipseCurve({-0.2, 0.1}, a, 1.5 * a);
}

void bm_build_uniform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto mesh = dgife::build_uniform(n, dgife::CellKind::Rectangle);
    benchmark::DoNotOptimize(mesh.elements.data());
  }
}
BENCHMARK(bm_build_uniform)->Arg(40)->Arg(160);

void bm_classify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mesh = dgife::build_uniform(n, dgife::CellKind::Rectangle);
  const auto curve = study_curve();
  for (auto _ : state) {
    auto cls = dgife::classify(mesh, curve);
    benchmark::DoNotOptimize(cls.is_interface.data());
  }
}
BENCHMARK(bm_classify)->Arg(40)->Arg(160);

}  // namespace

BENCHMARK_MAIN();
