#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ibnet/inference.hpp"
#include "ibnet/rng.hpp"

using namespace ibnet;

namespace {

std::vector<double> weibull_samples(std::size_t n) {
    Rng rng(5);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 1.0 - rng.uniform_unit();
        out.push_back(10.0 * std::pow(-std::log(u), 2.0));
    }
    return out;
}

void BM_WeibullRankFit(benchmark::State& state) {
    const auto samples = weibull_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_weibull_rank(samples));
    }
}
BENCHMARK(BM_WeibullRankFit)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PowerLawFit(benchmark::State& state) {
    Rng rng(6);
    std::vector<int> samples;
    const auto n = static_cast<std::size_t>(state.range(0));
    samples.reserve(n);
    while (samples.size() < n) {
        // crude heavy-tail generator is fine for throughput measurement
        const double u = 1.0 - rng.uniform_unit();
        const int v = static_cast<int>(std::pow(u, -1.0 / 1.7));
        if (v >= 1 && v <= 100000) samples.push_back(v);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_power_law(samples));
    }
}
BENCHMARK(BM_PowerLawFit)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_HurwitzZeta(benchmark::State& state) {
    double s = 2.0;
    for (auto _ : state) {
        s = 2.0 + (s - 2.0) * 0.5 + 0.7; // wander within (2, 4)
        benchmark::DoNotOptimize(hurwitz_zeta(s, 3.0));
    }
}
BENCHMARK(BM_HurwitzZeta);

} // namespace
