#include <benchmark/benchmark.h>

#include <vector>

#include "magdock/dsp.hpp"
#include "magdock/magnetics.hpp"
#include "magdock/simulator.hpp"
#include "magdock/solver.hpp"
#include "magdock/system.hpp"

namespace {

using namespace magdock;

const MiSystem kSys = MiSystem::standard();
const Vec3 kTruth(0.05, -0.03, 0.45);

SampleFrame hover_frame(std::uint64_t seed) {
  const auto v = forward_voltages(kTruth, Vec3::UnitZ(), kSys.layout, kSys.rx_coil, kSys.chain);
  ToneArray amps{};
  for (int i = 0; i < kAnchorCount; ++i) amps[i] = v[i];
  return synthesize_frame(amps, kSys.layout.frequencies(), {0.1, 0.7, 1.9, 2.8}, kSys.adc, 0.05, seed);
}

void BM_ForwardVoltages(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        forward_voltages(kTruth, Vec3::UnitZ(), kSys.layout, kSys.rx_coil, kSys.chain));
  }
}
BENCHMARK(BM_ForwardVoltages);

void BM_SynthesizeFrame(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(hover_frame(seed++));
}
BENCHMARK(BM_SynthesizeFrame);

void BM_ExtractAmplitudes(benchmark::State& state) {
  const auto frame = hover_frame(1);
  const auto freqs = kSys.layout.frequencies();
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_amplitudes(frame, freqs, kSys.adc, kSys.v_sat_thresh));
  }
}
BENCHMARK(BM_ExtractAmplitudes);

void BM_NelderMead(benchmark::State& state) {
  const auto v = forward_voltages(kTruth, Vec3::UnitZ(), kSys.layout, kSys.rx_coil, kSys.chain);
  const SolverOptions opts;
  const Objective f = [&](const Vec3& x) {
    return cost(x, v, kAllAnchors, Vec3::UnitZ(), kSys.layout, kSys.rx_coil, kSys.chain);
  };
  const Vec3 start = kTruth + Vec3(0.03, 0.02, -0.02);
  for (auto _ : state) benchmark::DoNotOptimize(nelder_mead(f, start, opts));
}
BENCHMARK(BM_NelderMead);

void BM_MiCycle(benchmark::State& state) {
  const auto frame = hover_frame(2);
  const auto freqs = kSys.layout.frequencies();
  const CalibrationCoefficients unit{};
  MiEstimate prev;
  prev.position_B = kTruth + Vec3(0.01, 0.01, -0.01);
  const SolverOptions opts;
  for (auto _ : state) {
    const auto raw = extract_amplitudes(frame, freqs, kSys.adc, kSys.v_sat_thresh);
    benchmark::DoNotOptimize(estimate_position(raw, unit, prev, Vec3::UnitZ(), kSys.layout,
                                               kSys.rx_coil, kSys.chain, opts));
  }
}
BENCHMARK(BM_MiCycle)->Unit(benchmark::kMillisecond);

void BM_S1Trial(benchmark::State& state) {
  const auto cfg = ScenarioConfig::preset(ScenarioKind::S1_Hover, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg));
}
BENCHMARK(BM_S1Trial)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
