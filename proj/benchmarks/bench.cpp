// Serial reference vs OpenMP kernels: filtration construction, KDE slice
// grids, and Monte Carlo set integrals.

#include <benchmark/benchmark.h>

#include "pdkde/cech.hpp"
#include "pdkde/kde.hpp"
#include "pdkde/rng.hpp"

using namespace pdkde;

namespace {

PointCloud bench_cloud(int n) { return sample_circle(n, 0.05, 71); }

KdeModel bench_model(int n_diagrams) {
    std::vector<PersistenceDiagram> diagrams;
    for (int i = 0; i < n_diagrams; ++i)
        diagrams.push_back(cech_diagram(sample_circle(10, 0.02, 100 + i), 1));
    return fit(diagrams, 0.025, 0.025);
}

void bm_filtration_serial(benchmark::State& state) {
    const PointCloud cloud = bench_cloud(static_cast<int>(state.range(0)));
    const double radius = default_max_radius(cloud);
    for (auto _ : state)
        benchmark::DoNotOptimize(cech_filtration_serial(cloud, 2, radius));
}

void bm_filtration_parallel(benchmark::State& state) {
    const PointCloud cloud = bench_cloud(static_cast<int>(state.range(0)));
    const double radius = default_max_radius(cloud);
    for (auto _ : state)
        benchmark::DoNotOptimize(cech_filtration(cloud, 2, radius));
}

void bm_slice_serial(benchmark::State& state) {
    const KdeModel model = bench_model(static_cast<int>(state.range(0)));
    const GridSpec grid{0.0, 1.25, 0.0, 1.25, 100};
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_slice_serial(model, {}, grid, 1));
}

void bm_slice_parallel(benchmark::State& state) {
    const KdeModel model = bench_model(static_cast<int>(state.range(0)));
    const GridSpec grid{0.0, 1.25, 0.0, 1.25, 100};
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_slice(model, {}, grid, 1));
}

void bm_set_integral_serial(benchmark::State& state) {
    const KdeModel model = bench_model(20);
    auto g = [](const PersistenceDiagram& z) { return static_cast<double>(z.size()); };
    for (auto _ : state)
        benchmark::DoNotOptimize(set_integral_mc(model, g, 20000, 3, 1));
}

void bm_set_integral_parallel(benchmark::State& state) {
    const KdeModel model = bench_model(20);
    auto g = [](const PersistenceDiagram& z) { return static_cast<double>(z.size()); };
    for (auto _ : state)
        benchmark::DoNotOptimize(set_integral_mc(model, g, 20000, 3));
}

}  // namespace

BENCHMARK(bm_filtration_serial)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_filtration_parallel)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_slice_serial)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_slice_parallel)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_set_integral_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_set_integral_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
