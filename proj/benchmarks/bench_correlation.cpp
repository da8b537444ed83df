#include <benchmark/benchmark.h>

#include <algorithm>

#include "qfc/correlation.hpp"
#include "qfc/random.hpp"

namespace {

qfc::TagList poisson_tags(double rate_hz, double duration_s, std::uint64_t seed) {
  qfc::Rng rng(seed);
  qfc::TagList tags;
  const double gap = 1e12 / rate_hz;
  for (double t = rng.exponential(gap); t < duration_s * 1e12; t += rng.exponential(gap)) {
    tags.push_back(qfc::TimeTag{static_cast<qfc::Picoseconds>(t), 0});
  }
  return tags;
}

/// Args: tag rate per channel (Hz), half window (ns).
void BM_CrossCorrelate(benchmark::State& state) {
  const double rate = static_cast<double>(state.range(0));
  const auto a = poisson_tags(rate, 1e6 / rate, 1);
  const auto b = poisson_tags(rate, 1e6 / rate, 2);
  qfc::CorrelationConfig cfg;
  cfg.bin_width_ps = 512;
  cfg.window_ps = (state.range(1) * 1000 / 512) * 512;
  for (auto _ : state) benchmark::DoNotOptimize(qfc::cross_correlate(a, b, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size() + b.size()));
}
BENCHMARK(BM_CrossCorrelate)
    ->Args({200'000, 50})
    ->Args({1'000'000, 50})
    ->Args({1'000'000, 1000})
    ->Args({10'000'000, 200})
    ->Unit(benchmark::kMillisecond);

void BM_CrossCorrelateChunked(benchmark::State& state) {
  const auto a = poisson_tags(1e6, 1.0, 3);
  const auto b = poisson_tags(1e6, 1.0, 4);
  qfc::CorrelationConfig cfg;
  cfg.bin_width_ps = 512;
  cfg.window_ps = 512 * 100;
  const qfc::AcquisitionSpan sa{a.front().timestamp, a.back().timestamp};
  const qfc::AcquisitionSpan sb{b.front().timestamp, b.back().timestamp};
  const auto chunks = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qfc::cross_correlate_chunked(a, b, cfg, sa, sb, chunks));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size() + b.size()));
}
BENCHMARK(BM_CrossCorrelateChunked)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_StartStop(benchmark::State& state) {
  qfc::TagList sync;
  for (qfc::Picoseconds t = 0; t < 10'000'000'000; t += 12500) sync.push_back(qfc::TimeTag{t, 0});
  const auto det = poisson_tags(1e6, 0.01, 5);
  const qfc::StartStopConfig cfg{64, 12480};
  for (auto _ : state) benchmark::DoNotOptimize(qfc::start_stop_histogram(sync, det, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sync.size() + det.size()));
}
BENCHMARK(BM_StartStop)->Unit(benchmark::kMillisecond);

}  // namespace
