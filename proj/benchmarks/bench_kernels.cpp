#include <benchmark/benchmark.h>

#include "cdsurface/tiling.hpp"

using namespace cdsurface;

static void BM_Quadrature(benchmark::State& state) {
    const auto q = unit_circle_quadrature(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(q.integrate([](cplx z) { return std::exp(z) / z; }));
}
BENCHMARK(BM_Quadrature)->Arg(64)->Arg(256)->Arg(1024);

static void BM_BuildMops(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const MatrixWeight w = as_matrix_weight(CyclicUniform{2, 2 * N, N + 1});
    const auto q = unit_circle_quadrature(256);
    for (auto _ : state) benchmark::DoNotOptimize(build_mops(w, q, N));
}
BENCHMARK(BM_BuildMops)->DenseRange(1, 4);

static void BM_CDKernelFormula(benchmark::State& state) {
    const MOPSystem s = build_mops(as_matrix_weight(CyclicUniform{2, 2, 2}), unit_circle_quadrature(256), 2);
    const cplx w{0.4, 0.3}, z{-1.2, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(cd_kernel_formula(s, w, z));
}
BENCHMARK(BM_CDKernelFormula);

static void BM_DKKernelSetup(benchmark::State& state) {
    const HexagonModel m = HexagonModel::uniform(4, 2, 2, 2);
    const auto nodes = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(DKKernel(m, nodes));
}
BENCHMARK(BM_DKKernelSetup)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_DKKernelBlock(benchmark::State& state) {
    const HexagonModel m = HexagonModel::periodic_2x2([] {
        Periodic2x2 p;
        p.b[0][1] = 2.0;
        p.a[0][1] = 2.0;
        p.L = 4;
        return p;
    }());
    const DKKernel dk(m, 256);
    int y = 0;
    // distinct heights so the block cache does not answer
    for (auto _ : state) benchmark::DoNotOptimize(dk.block({1, y++ % 1000, 3, 0}));
}
BENCHMARK(BM_DKKernelBlock);

BENCHMARK_MAIN();
