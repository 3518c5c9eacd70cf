#include <benchmark/benchmark.h>

#include "expanse/parallel.hpp"
#include "expanse/sampled.hpp"
#include "expanse/symbolic.hpp"
#include "expanse/torus.hpp"

namespace {

using namespace expanse;

const ToralAutomorphism& cat() {
    static const ToralAutomorphism t(IntMatrix({{2, 1}, {1, 1}}));
    return t;
}

// All-pairs Bowen scan on the Q x Q grid of the cat map.
void BM_PairScan(benchmark::State& state) {
    const auto sys = rational_grid_system(cat(), RationalGrid(static_cast<int>(state.range(0))));
    const Parallelism par{static_cast<unsigned>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(expansive_constant_estimate(sys, 2, 8, par));
}
BENCHMARK(BM_PairScan)->ArgsProduct({{8, 16, 24}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_GridBound(benchmark::State& state) {
    const RationalGrid grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gamma_upper_bound(cat(), 12, grid));
}
BENCHMARK(BM_GridBound)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

void BM_ExactGamma(benchmark::State& state) {
    const SymbolicSpace sp(TransitionMatrix({{1, 1, 0}, {0, 1, 1}, {1, 1, 1}}), 2.0, Sidedness::two_sided);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exact_expansive_constant(sp, n).exponent);
}
BENCHMARK(BM_ExactGamma)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMicrosecond);

void BM_Lebesgue(benchmark::State& state) {
    const SymbolicSpace sp(TransitionMatrix::golden_mean(), 2.0, Sidedness::two_sided);
    std::vector<std::vector<Symbol>> words;
    const auto sys = periodic_orbit_sample(sp, static_cast<int>(state.range(0)), &words);
    const auto cover = zero_cylinder_cover(words);
    for (auto _ : state) benchmark::DoNotOptimize(lebesgue_sequence(sys, cover, 6));
}
BENCHMARK(BM_Lebesgue)->DenseRange(8, 14, 2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
