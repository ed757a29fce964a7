#include <benchmark/benchmark.h>

#include "ibnet/model.hpp"

using namespace ibnet;

namespace {

std::vector<BankState> frozen_states(int n_p, std::uint64_t seed) {
    Rng rng(seed);
    const auto types = assign_types(n_p, 0.56, 0.34, 0.10, rng);
    std::vector<BankState> states(n_p);
    for (int i = 0; i < n_p; ++i) {
        const double a = rng.uniform_unit();
        states[i] = BankState{i + 1, types[i], a, std::acos(a)};
    }
    return states;
}

void BM_DailyEdges(benchmark::State& state) {
    const int n_p = static_cast<int>(state.range(0));
    const auto states = frozen_states(n_p, 7);
    Rng rng(11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_daily_edges(states, 4.0, rng));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n_p) * n_p);
}
BENCHMARK(BM_DailyEdges)->Arg(100)->Arg(300);

void BM_ActivityUpdateDay(benchmark::State& state) {
    const int n_p = static_cast<int>(state.range(0));
    ModelParams params;
    params.n_p = n_p;
    auto states = frozen_states(n_p, 7);
    Rng rng(11);
    for (auto _ : state) {
        for (BankState& s : states) s = update_activity(s, params, rng);
        benchmark::DoNotOptimize(states.data());
    }
    state.SetItemsProcessed(state.iterations() * n_p);
}
BENCHMARK(BM_ActivityUpdateDay)->Arg(300);

void BM_SimulateSeries(benchmark::State& state) {
    ModelParams params;
    params.n_p = static_cast<int>(state.range(0));
    params.burn_in = 500;
    params.horizon = 600;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_series(params, WeightParams{}, ++seed));
    }
}
BENCHMARK(BM_SimulateSeries)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

} // namespace
