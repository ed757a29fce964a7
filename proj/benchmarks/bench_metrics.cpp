#include <benchmark/benchmark.h>

#include "ibnet/metrics.hpp"
#include "ibnet/model.hpp"

using namespace ibnet;

namespace {

NetworkSeries bench_series(int n_p, int days) {
    ModelParams params;
    params.n_p = n_p;
    params.burn_in = 500;
    params.horizon = 500 + days;
    return simulate_series(params, WeightParams{}, 99);
}

void BM_Bipartivity(benchmark::State& state) {
    const NetworkSeries series = bench_series(static_cast<int>(state.range(0)), 20);
    for (auto _ : state) {
        for (const DailyNetwork& net : series.days)
            if (!net.edges.empty()) benchmark::DoNotOptimize(bipartivity(net));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(series.day_count()));
}
BENCHMARK(BM_Bipartivity)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_DurationExtraction(benchmark::State& state) {
    const NetworkSeries series = bench_series(300, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(duration_interval_samples(series, Subject::Pair));
    }
}
BENCHMARK(BM_DurationExtraction)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Turnover(benchmark::State& state) {
    const NetworkSeries series = bench_series(300, 500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(turnover_rate(series));
    }
}
BENCHMARK(BM_Turnover)->Unit(benchmark::kMillisecond);

} // namespace
