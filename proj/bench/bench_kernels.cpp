// Serial reference vs OpenMP kernels. Results are bit-identical; only the
// wall time should differ.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "canput/mc.hpp"
#include "canput/pricer.hpp"

using namespace canput;

namespace {

const ModelParams& model() {
    static const ModelParams m = make_model(0.05, 0.2, 5.0, 2.0);
    return m;
}

const Contract& contract() {
    static const Contract c = make_contract(100.0, 120.0, 110.0);
    return c;
}

mc::PassageProblem problem() {
    return {std::log(110.0), std::log(63.18), std::log(120.0), 200.0, false};
}

mc::McConfig config(std::int64_t paths, int workers) {
    mc::McConfig cfg;
    cfg.n_paths = static_cast<std::size_t>(paths);
    cfg.seed = 2024;
    cfg.workers = workers;
    return cfg;
}

std::vector<double> grid() {
    std::vector<double> g;
    for (int i = 1; i < 10000; ++i) g.push_back(0.01 * i);
    return g;
}

void BM_PassageKernelSerial(benchmark::State& state) {
    const auto dyn = mc::Dynamics::from(model());
    const auto cfg = config(state.range(0), 1);
    for (auto _ : state) benchmark::DoNotOptimize(mc::reference::run_passage_kernel(dyn, problem(), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PassageKernelParallel(benchmark::State& state) {
    const auto dyn = mc::Dynamics::from(model());
    const auto cfg = config(state.range(0), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(mc::run_passage_kernel(dyn, problem(), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GridSearchSerial(benchmark::State& state) {
    const auto g = grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(mc::reference::grid_search_threshold_closed_form(model(), contract(), g));
}

void BM_GridSearchParallel(benchmark::State& state) {
    const auto g = grid();
    const auto cfg = config(100, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mc::grid_search_threshold(model(), contract(), cfg, g));
}

}  // namespace

BENCHMARK(BM_PassageKernelSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PassageKernelParallel)->Args({10000, 1})->Args({10000, 2})->Args({10000, 4})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridSearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSearchParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
