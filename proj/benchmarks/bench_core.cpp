#include <benchmark/benchmark.h>

#include "sargcert/attack_forms.hpp"
#include "sargcert/bound_verifier.hpp"
#include "sargcert/keyrate.hpp"
#include "sargcert/protocol_sim.hpp"

using namespace sargcert;

static void BM_FormSet(benchmark::State& state) {
    const auto protocol = state.range(0) ? Protocol::SixState : Protocol::FourState;
    const int nu = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(FormSet(protocol, nu));
}
BENCHMARK(BM_FormSet)->ArgsProduct({{0, 1}, {1, 2, 3, 4}})->Unit(benchmark::kMillisecond);

static void BM_Frontier(benchmark::State& state) {
    const FormSet forms(Protocol::FourState, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(frontier(forms, 2.5));
}
BENCHMARK(BM_Frontier)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

static void BM_ThresholdTwo(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(threshold_two());
}
BENCHMARK(BM_ThresholdTwo)->Unit(benchmark::kMicrosecond);

static void BM_MonteCarlo(benchmark::State& state) {
    SimConfig cfg;
    cfg.source = PhotonSource::fixed(static_cast<int>(state.range(0)));
    cfg.depolarizing = 0.03;
    cfg.transmittance = 1.0;
    cfg.trials = 100000;
    for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(cfg, 1));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.trials));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
