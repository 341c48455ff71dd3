// Microbenchmarks for the hot paths of the pipeline: pattern synthesis,
// dithering, bucket measurement, inverse transform, and one full cell.
//
//   ./fsi_bench --benchmark_min_time=0.5

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "fsi/acquisition.hpp"
#include "fsi/harness.hpp"
#include "fsi/patterns.hpp"
#include "fsi/reconstruction.hpp"

namespace {

fsi::PatternParams params_for(int n) {
    fsi::PatternParams p;
    p.fx = 3.0 / n;
    p.fy = 5.0 / n;
    p.phase = 0.7;
    p.width = n;
    p.height = n;
    return p;
}

fsi::Image checker_object(int n) {
    fsi::Image img(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            img.at(x, y) = ((x / 8 + y / 8) % 2) ? 220.0 : 35.0;
    return img;
}

void bm_fourier_pattern(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const fsi::PatternParams params = params_for(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(fsi::fourier_pattern(params));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_fourier_pattern)->Arg(64)->Arg(128)->Arg(256);

void bm_floyd_steinberg(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const fsi::GrayPattern pat = fsi::fourier_pattern(params_for(n));
    for (auto _ : state)
        benchmark::DoNotOptimize(fsi::floyd_steinberg(pat));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_floyd_steinberg)->Arg(64)->Arg(128)->Arg(256);

void bm_measure_gray(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const fsi::Image obj = checker_object(n);
    const fsi::GrayPattern pat = fsi::fourier_pattern(params_for(n));
    for (auto _ : state)
        benchmark::DoNotOptimize(fsi::measure(obj, pat));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_measure_gray)->Arg(64)->Arg(128)->Arg(256);

void bm_measure_binary(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const fsi::Image obj = checker_object(n);
    const fsi::BinaryPattern pat = fsi::floyd_steinberg(fsi::fourier_pattern(params_for(n)));
    for (auto _ : state)
        benchmark::DoNotOptimize(fsi::measure(obj, pat));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_measure_binary)->Arg(64)->Arg(128)->Arg(256);

void bm_reconstruct(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const fsi::Image obj = checker_object(n);
    const auto sched = fsi::frequency_schedule(n, n);
    fsi::AcquisitionConfig cfg;
    cfg.budget = 2 * sched.size();
    const fsi::SpectrumGrid spectrum =
        fsi::symmetrize(fsi::assemble(fsi::acquire(obj, sched, cfg)));
    for (auto _ : state)
        benchmark::DoNotOptimize(fsi::reconstruct(spectrum));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_reconstruct)->Arg(64)->Arg(128);

void bm_run_single_cell(benchmark::State& state) {
    const fsi::Image obj = checker_object(64);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            fsi::run_single(obj, fsi::Method::cfsi, fsi::PatternMode::grayscale, 600, 0.5, 1));
}
BENCHMARK(bm_run_single_cell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
