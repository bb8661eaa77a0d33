// Serial references against the OpenMP kernels. Set PMC_THREADS to cap the worker count.

#include "pmcvol/data/features.hpp"
#include "pmcvol/data/returns.hpp"
#include "pmcvol/synth/regime_garch.hpp"
#include "pmcvol/train/experiment.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

namespace {

using namespace pmcvol;

std::vector<double> prices(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1e-3);
    std::vector<double> p(n);
    double lp = std::log(100.0);
    for (auto& v : p) {
        v = std::exp(lp);
        lp += g(rng);
    }
    return p;
}

void BM_LogReturnsSerial(benchmark::State& state) {
    const auto p = prices(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(data::serial::log_returns(p));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LogReturnsParallel(benchmark::State& state) {
    const auto p = prices(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(data::log_returns(p));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HistoricVolatilitySerial(benchmark::State& state) {
    const auto r = data::log_returns(prices(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(data::serial::historic_volatility(r));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HistoricVolatilityParallel(benchmark::State& state) {
    const auto r = data::log_returns(prices(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(data::historic_volatility(r));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_WindowReturnSerial(benchmark::State& state) {
    const auto p = prices(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(data::serial::window_log_return(p));
    }
}

void BM_WindowReturnParallel(benchmark::State& state) {
    const auto p = prices(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(data::window_log_return(p));
    }
}

const data::Dataset& benchmark_dataset() {
    static const data::Dataset ds = [] {
        const auto series = synth::generate(synth::default_benchmark_spec(), 1000);
        return data::build_dataset(data::open_prices(series.prices));
    }();
    return ds;
}

train::TrainConfig short_config() {
    train::TrainConfig c;
    c.epochs = 20;
    c.patience = 20;
    return c;
}

void BM_ExperimentSerial(benchmark::State& state) {
    const auto spec = train::parse_model_spec("pmc", 2, "garch");
    for (auto _ : state) {
        benchmark::DoNotOptimize(train::serial::run_experiment(benchmark_dataset(), spec, short_config(), 5));
    }
}

void BM_ExperimentParallel(benchmark::State& state) {
    const auto spec = train::parse_model_spec("pmc", 2, "garch");
    for (auto _ : state) {
        benchmark::DoNotOptimize(train::run_experiment(benchmark_dataset(), spec, short_config(), 5));
    }
}

}  // namespace

BENCHMARK(BM_LogReturnsSerial)->Arg(1 << 20);
BENCHMARK(BM_LogReturnsParallel)->Arg(1 << 20);
BENCHMARK(BM_HistoricVolatilitySerial)->Arg(1 << 20);
BENCHMARK(BM_HistoricVolatilityParallel)->Arg(1 << 20);
BENCHMARK(BM_WindowReturnSerial)->Arg(1 << 20);
BENCHMARK(BM_WindowReturnParallel)->Arg(1 << 20);
BENCHMARK(BM_ExperimentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
