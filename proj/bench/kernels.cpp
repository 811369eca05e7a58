// Parallel kernels against their serial references.

#include "viscograd/regularize.hpp"
#include "viscograd/solver.hpp"
#include "viscograd/verify.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace viscograd;

namespace {

GridFunction wave(double h) {
    auto g = build_grid(Box::rect(0, 1, 0, 1), h);
    return GridFunction::sample(g, [](const Point& x) { return 0.3 * std::sin(5 * x[0]) * std::cos(4 * x[1]) + 0.2 * x[0]; });
}

double spacing(const benchmark::State& state) { return 1.0 / static_cast<double>(state.range(0)); }

void BM_SupConvolution(benchmark::State& state) {
    const auto u = wave(spacing(state));
    for (auto _ : state) benchmark::DoNotOptimize(sup_convolution(u, 0.02));
}

void BM_SupConvolutionReference(benchmark::State& state) {
    const auto u = wave(spacing(state));
    for (auto _ : state) benchmark::DoNotOptimize(reference::sup_convolution(u, 0.02));
}

void BM_EnergyGradient(benchmark::State& state) {
    const auto u = wave(spacing(state));
    std::vector<double> grad(u.grid().size());
    for (auto _ : state) benchmark::DoNotOptimize(m_energy_gradient(u, 16.0, grad));
}

void BM_EnergyGradientReference(benchmark::State& state) {
    const auto u = wave(spacing(state));
    std::vector<double> grad(u.grid().size());
    for (auto _ : state) benchmark::DoNotOptimize(reference::m_energy_gradient(u, 16.0, grad));
}

const std::vector<double> kAlphas{1, 4, 16, 64, 256};

void BM_Penalization(benchmark::State& state) {
    const auto u = wave(spacing(state));
    const auto v = -u;
    for (auto _ : state) benchmark::DoNotOptimize(penalization_diagnostic(u, v, kAlphas));
}

void BM_PenalizationReference(benchmark::State& state) {
    const auto u = wave(spacing(state));
    const auto v = -u;
    for (auto _ : state) benchmark::DoNotOptimize(reference::penalization_diagnostic(u, v, kAlphas));
}

void BM_ConeCheck(benchmark::State& state) {
    const auto u = wave(spacing(state));
    for (auto _ : state) benchmark::DoNotOptimize(cone_comparison_check(u, 64, 16, 0));
}

void BM_ConeCheckReference(benchmark::State& state) {
    const auto u = wave(spacing(state));
    for (auto _ : state) benchmark::DoNotOptimize(reference::cone_comparison_check(u, 64, 16, 0));
}

void tug_of_war(benchmark::State& state, bool jacobi) {
    auto g = build_grid(Box::rect(0, 1, 0, 1), spacing(state));
    const auto b = BoundaryData::from_function([](const Point& x) { return std::hypot(x[0] + 0.5, x[1] + 0.5); });
    TugOfWarOptions opts;
    opts.jacobi = jacobi;
    opts.tol = 1e-10;
    std::size_t sweeps = 0;
    for (auto _ : state) {
        const auto r = solve_by_tug_of_war(g, b, 2 * g->h(), opts);
        sweeps = r.iterations;
        benchmark::DoNotOptimize(r.final);
    }
    state.counters["sweeps"] = static_cast<double>(sweeps);
}

void BM_TugOfWarJacobi(benchmark::State& state) { tug_of_war(state, true); }
void BM_TugOfWarGaussSeidel(benchmark::State& state) { tug_of_war(state, false); }

} // namespace

BENCHMARK(BM_SupConvolution)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SupConvolutionReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnergyGradient)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnergyGradientReference)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Penalization)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PenalizationReference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConeCheck)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConeCheckReference)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TugOfWarJacobi)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TugOfWarGaussSeidel)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
