// Serial references against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "fairshare/generators.hpp"
#include "fairshare/ordinal.hpp"
#include "fairshare/shares.hpp"
#include "fairshare/sweeps.hpp"

using namespace fairshare;

namespace {

Valuation ptas_input(int m) { return generate({gen::Uniform{m, 1, 1000}, 3}).valuations[0]; }

void BM_Ptas2(benchmark::State& state) {
  const Valuation v = ptas_input(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ptas2_share(v, Rational(1, 10)).value);
}

void BM_Ptas2Serial(benchmark::State& state) {
  const Valuation v = ptas_input(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ptas2_share_serial(v, Rational(1, 10)).value);
}

const Valuation kProbeInput = make_valuation({9, 8, 7, 7, 5, 4, 4, 3, 2, 1});

void BM_Probe(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(self_max_probe(share::Mms{}, kProbeInput, 3, probe::Random{200, 1}).best_found);
}

void BM_ProbeSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(self_max_probe_serial(share::Mms{}, kProbeInput, 3, probe::Random{200, 1}).best_found);
}

void BM_RatioSweep(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ratio_sweep(share::Nested{1}, gen::Uniform{10, 3, 50}, 200, 1).min_ratio);
}

void BM_RatioSweepSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ratio_sweep_serial(share::Nested{1}, gen::Uniform{10, 3, 50}, 200, 1).min_ratio);
}

void BM_NsFuzz(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ns_fuzz(3, gen::Uniform{12, 4, 50}, 200, 1).failures.size());
}

void BM_NsFuzzSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ns_fuzz_serial(3, gen::Uniform{12, 4, 50}, 200, 1).failures.size());
}

}  // namespace

BENCHMARK(BM_Ptas2)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Ptas2Serial)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Probe)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ProbeSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RatioSweep)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RatioSweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NsFuzz)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NsFuzzSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
