#include <benchmark/benchmark.h>

#include "qfc/detection.hpp"
#include "qfc/emitter.hpp"
#include "qfc/optics.hpp"

namespace {

void BM_GenerateSignal(benchmark::State& state) {
  qfc::EmitterConfig cfg;
  cfg.excitation = state.range(0) == 0 ? qfc::Excitation::pulsed : qfc::Excitation::continuous;
  cfg = qfc::calibrate_brightness(cfg);
  std::uint64_t seed = 0;
  std::size_t n = 0;
  for (auto _ : state) {
    const auto s = qfc::generate_signal_stream(cfg, 1.0, ++seed);
    n += s.size();
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GenerateSignal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConvertStream(benchmark::State& state) {
  const auto in = qfc::generate_signal_stream(qfc::calibrate_brightness(qfc::EmitterConfig{}), 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(qfc::convert_stream(in, qfc::PumpConfig{}, qfc::ConversionSpec{}, 1.0, 2));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_ConvertStream)->Unit(benchmark::kMillisecond);

void BM_Detect(benchmark::State& state) {
  const auto in = qfc::generate_signal_stream(qfc::calibrate_brightness(qfc::EmitterConfig{}), 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(qfc::detect(in, qfc::si_apd(0), 1.0, 4));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);

void BM_SourceToTags(benchmark::State& state) {
  const auto cfg = qfc::calibrate_brightness(qfc::EmitterConfig{});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    ++seed;
    const auto sig = qfc::generate_signal_stream(cfg, 0.2, seed);
    const auto bg = qfc::generate_background_stream(cfg.background_rate_hz, cfg.background_band, 0.2, seed + 1);
    const auto conv = qfc::convert_stream(qfc::merge_streams(sig, bg), qfc::PumpConfig{}, qfc::ConversionSpec{}, 0.2, seed);
    const auto [a, b] = qfc::beamsplitter(conv, 0.5, seed);
    benchmark::DoNotOptimize(qfc::detect(a, qfc::sspd(1), 0.2, seed));
    benchmark::DoNotOptimize(qfc::detect(b, qfc::sspd(2), 0.2, seed + 7));
  }
}
BENCHMARK(BM_SourceToTags)->Unit(benchmark::kMillisecond);

}  // namespace
