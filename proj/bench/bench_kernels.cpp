// Serial reference versus OpenMP kernels.

#include <benchmark/benchmark.h>

#include <cmath>

#include "qkd3/epbound.hpp"
#include "qkd3/protocol_sim.hpp"
#include "qkd3/sweeps.hpp"

using namespace qkd3;

namespace {

template <bool Parallel>
void BM_Fig1(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::fig1_sweep(0.1, 101) : kernels::fig1_sweep_serial(0.1, 101));
}

template <bool Parallel>
void BM_Region(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::region_sweep(21, BoundMethod::exact)
                                          : kernels::region_sweep_serial(21, BoundMethod::exact));
}

template <bool Parallel>
void BM_Decoy(benchmark::State& state) {
    const auto grid = kernels::distance_grid(0.0, 150.0, 5.0);
    const ChannelParams p;
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::decoy_sweep(p, Protocol::three_state, grid)
                                          : kernels::decoy_sweep_serial(p, Protocol::three_state, grid));
}

template <bool Parallel>
void BM_Soundness(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(Parallel ? kernels::soundness_scan(0, 2000, 1e-9)
                                          : kernels::soundness_scan_serial(0, 2000, 1e-9));
}

template <bool Parallel>
void BM_Protocol(benchmark::State& state) {
    SimConfig c;
    c.n = state.range(0);
    c.seed = 1;
    KrausCoefficients w = exact_bound(0.05, 0.02).witness;
    const double s = 1.0 / std::sqrt(w.total_weight());
    c.attack = {w.a_i * s, w.a_x * s, w.a_y * s, w.a_z * s};
    for (auto _ : state) benchmark::DoNotOptimize(Parallel ? run_protocol(c) : run_protocol_serial(c));
    state.SetItemsProcessed(state.iterations() * c.transmitted_rounds());
}

}  // namespace

BENCHMARK(BM_Fig1<false>)->Name("fig1/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fig1<true>)->Name("fig1/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Region<false>)->Name("region/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Region<true>)->Name("region/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Decoy<false>)->Name("decoy/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Decoy<true>)->Name("decoy/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Soundness<false>)->Name("soundness/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Soundness<true>)->Name("soundness/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Protocol<false>)->Name("protocol/serial")->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Protocol<true>)->Name("protocol/omp")->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
