#include <benchmark/benchmark.h>

#include <random>

#include "lab/measures.hpp"
#include "lab/oscillatory.hpp"
#include "lab/restriction.hpp"

using namespace lab;

namespace {

AtomicMeasure cantor(int depth) {
    CantorSpec spec;
    spec.depth = depth;
    return build_cantor_measure(spec);
}

void BM_ft_atomic(benchmark::State& state) {
    AtomicMeasure m = cantor(int(state.range(0)));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(-1000.0, 1000.0);
    for (auto _ : state) {
        Frequency xi{unif(rng), unif(rng)};
        benchmark::DoNotOptimize(ft_atomic(m, xi));
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(m.atoms.size()));
}
BENCHMARK(BM_ft_atomic)->Arg(5)->Arg(7)->Arg(9);

void BM_ft_batch(benchmark::State& state) {
    AtomicMeasure m = cantor(7);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(-1000.0, 1000.0);
    std::vector<Frequency> pts;
    for (int i = 0; i < 256; ++i) pts.push_back({unif(rng), unif(rng)});
    for (auto _ : state) benchmark::DoNotOptimize(ft_batch(m, pts));
    state.SetItemsProcessed(state.iterations() * 256 * std::int64_t(m.atoms.size()));
}
BENCHMARK(BM_ft_batch);

void BM_block_integral(benchmark::State& state) {
    AtomicMeasure m = cantor(6);
    CurveSpec curve = CurveSpec::parabola();
    double R = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(restriction_integral(m, curve, R));
}
BENCHMARK(BM_block_integral)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_weighted_block(benchmark::State& state) {
    AtomicMeasure m = cantor(6);
    for (auto _ : state)
        benchmark::DoNotOptimize(weighted_block(m, 2.0, 0.25, 256.0, BlockKind::sqrt_window));
}
BENCHMARK(BM_weighted_block)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
