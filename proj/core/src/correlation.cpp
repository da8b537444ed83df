#include "qfc/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "qfc/error.hpp"
#include "qfc/units.hpp"

namespace qfc {

namespace {

bool by_time(const TimeTag& a, const TimeTag& b) { return a.timestamp < b.timestamp; }

void sweep(std::span<const TimeTag> a, std::span<const TimeTag> b, const CorrelationConfig& cfg,
           std::vector<std::uint64_t>& counts) {
  const Picoseconds reach = cfg.reach_ps();
  const auto half = static_cast<std::int64_t>(cfg.half_bins());
  std::size_t lo = 0;
  for (const auto& ta : a) {
    const Picoseconds t = ta.timestamp;
    while (lo < b.size() && b[lo].timestamp < t - reach) ++lo;
    for (std::size_t j = lo; j < b.size(); ++j) {
      const Picoseconds tau = b[j].timestamp - t;
      if (tau > reach) break;
      ++counts[static_cast<std::size_t>(lag_bin(tau, cfg.bin_width_ps) + half)];
    }
  }
}

AcquisitionSpan span_of(std::span<const TimeTag> tags) {
  if (tags.empty()) return {};
  return {tags.front().timestamp, tags.back().timestamp};
}

std::uint64_t count_within(std::span<const TimeTag> tags, Picoseconds lo, Picoseconds hi) {
  const auto first = std::lower_bound(tags.begin(), tags.end(), TimeTag{lo, 0}, by_time);
  const auto last = std::upper_bound(tags.begin(), tags.end(), TimeTag{hi, 0}, by_time);
  return last > first ? static_cast<std::uint64_t>(last - first) : 0;
}

void fill_metadata(CorrelationHistogram& h, std::span<const TimeTag> a, std::span<const TimeTag> b,
                   AcquisitionSpan span_a, AcquisitionSpan span_b) {
  const Picoseconds lo = std::max(span_a.start_ps, span_b.start_ps);
  const Picoseconds hi = std::min(span_a.stop_ps, span_b.stop_ps);
  if (hi <= lo) return;
  h.t_int_s = ps_to_seconds(static_cast<double>(hi - lo));
  h.tags_a = count_within(a, lo, hi);
  h.tags_b = count_within(b, lo, hi);
  h.rate_a_hz = static_cast<double>(h.tags_a) / h.t_int_s;
  h.rate_b_hz = static_cast<double>(h.tags_b) / h.t_int_s;
}

}  // namespace

void validate(const CorrelationConfig& cfg) {
  if (cfg.bin_width_ps <= 0) throw ContractError("correlation: bin width must be positive");
  if (cfg.window_ps < 0 || cfg.window_ps % cfg.bin_width_ps != 0) {
    throw ContractError("correlation: window must be a non-negative integer multiple of the bin width");
  }
}

std::uint64_t CorrelationHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

CorrelationHistogram cross_correlate(std::span<const TimeTag> a, std::span<const TimeTag> b,
                                     const CorrelationConfig& cfg) {
  return cross_correlate(a, b, cfg, span_of(a), span_of(b));
}

CorrelationHistogram cross_correlate(std::span<const TimeTag> a, std::span<const TimeTag> b,
                                     const CorrelationConfig& cfg, AcquisitionSpan span_a, AcquisitionSpan span_b) {
  validate(cfg);
  require_time_ordered(a, "cross_correlate");
  require_time_ordered(b, "cross_correlate");
  CorrelationHistogram h;
  h.config = cfg;
  h.counts.assign(cfg.bin_count(), 0);
  sweep(a, b, cfg, h.counts);
  fill_metadata(h, a, b, span_a, span_b);
  return h;
}

CorrelationHistogram cross_correlate_chunked(std::span<const TimeTag> a, std::span<const TimeTag> b,
                                             const CorrelationConfig& cfg, AcquisitionSpan span_a,
                                             AcquisitionSpan span_b, std::size_t chunks, unsigned threads) {
  validate(cfg);
  require_time_ordered(a, "cross_correlate_chunked");
  require_time_ordered(b, "cross_correlate_chunked");
  chunks = std::max<std::size_t>(1, std::min(chunks, std::max<std::size_t>(a.size(), 1)));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const Picoseconds reach = cfg.reach_ps();
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(cfg.bin_count(), 0));
  auto work = [&](std::size_t c) {
    const std::size_t i0 = a.size() * c / chunks;
    const std::size_t i1 = a.size() * (c + 1) / chunks;
    if (i0 == i1) return;
    auto sub_a = a.subspan(i0, i1 - i0);
    // Margin: every B tag that can pair with this chunk of A.
    const auto b0 = std::lower_bound(b.begin(), b.end(), TimeTag{sub_a.front().timestamp - reach, 0}, by_time);
    const auto b1 = std::upper_bound(b.begin(), b.end(), TimeTag{sub_a.back().timestamp + reach, 0}, by_time);
    sweep(sub_a, std::span<const TimeTag>(b0, b1), cfg, partial[c]);
  };

  std::vector<std::thread> pool;
  const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  for (unsigned w = 0; w < n_workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += n_workers) work(c);
    });
  }
  for (auto& t : pool) t.join();

  CorrelationHistogram h;
  h.config = cfg;
  h.counts.assign(cfg.bin_count(), 0);
  for (const auto& p : partial)
    for (std::size_t j = 0; j < p.size(); ++j) h.counts[j] += p[j];
  fill_metadata(h, a, b, span_a, span_b);
  return h;
}

double poisson_expectation_per_bin(const CorrelationHistogram& hist) {
  return hist.rate_a_hz * hist.rate_b_hz * (static_cast<double>(hist.config.bin_width_ps) * 1e-12) * hist.t_int_s;
}

std::vector<G2Point> normalize_g2(const CorrelationHistogram& hist) {
  const double denom = poisson_expectation_per_bin(hist);
  if (!(hist.t_int_s > 0.0) || !(denom > 0.0)) {
    throw NormalizationError("normalize_g2: zero count rate or integration time");
  }
  std::vector<G2Point> out(hist.counts.size());
  for (std::size_t j = 0; j < hist.counts.size(); ++j) {
    out[j] = G2Point{hist.bin_center_ps(j), hist.counts[j], static_cast<double>(hist.counts[j]) / denom};
  }
  return out;
}

std::vector<G2Point> normalize_pooled(std::span<const CorrelationHistogram> hists) {
  if (hists.empty()) throw NormalizationError("normalize_pooled: no histograms");
  const auto& first = hists.front();
  double denom = 0.0;
  std::vector<std::uint64_t> counts(first.counts.size(), 0);
  for (const auto& h : hists) {
    if (h.config.bin_width_ps != first.config.bin_width_ps || h.config.window_ps != first.config.window_ps) {
      throw ContractError("normalize_pooled: histograms have different layouts");
    }
    denom += poisson_expectation_per_bin(h);
    for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += h.counts[j];
  }
  if (!(denom > 0.0)) throw NormalizationError("normalize_pooled: zero count rate or integration time");
  std::vector<G2Point> out(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    out[j] = G2Point{first.bin_center_ps(j), counts[j], static_cast<double>(counts[j]) / denom};
  }
  return out;
}

double g2_zero(std::span<const G2Point> curve, Picoseconds bin_width_ps, Picoseconds tau_ps) {
  if (curve.empty() || bin_width_ps <= 0) throw ContractError("g2_zero: empty curve");
  const std::int64_t k = lag_bin(tau_ps, bin_width_ps);
  const std::int64_t k0 = curve.front().tau_ps / bin_width_ps;
  const std::int64_t idx = k - k0;
  if (idx < 0 || idx >= static_cast<std::int64_t>(curve.size())) {
    throw ContractError("g2_zero: requested lag " + std::to_string(tau_ps) + " ps lies outside the window");
  }
  return curve[static_cast<std::size_t>(idx)].g2;
}

DipEstimate find_dip(std::span<const G2Point> curve, std::size_t smoothing, Picoseconds search_limit_ps) {
  if (curve.empty()) throw ContractError("find_dip: empty curve");
  if (smoothing == 0 || smoothing % 2 == 0) throw ContractError("find_dip: smoothing must be odd");
  const std::size_t half = smoothing / 2;
  DipEstimate best;
  bool have = false;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    if (search_limit_ps > 0 && std::llabs(curve[j].tau_ps) > search_limit_ps) continue;
    const std::size_t lo = j >= half ? j - half : 0;
    const std::size_t hi = std::min(curve.size() - 1, j + half);
    double sum = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) sum += curve[i].g2;
    const double mean = sum / static_cast<double>(hi - lo + 1);
    const bool better = !have || mean < best.smoothed ||
                        (mean == best.smoothed && std::llabs(curve[j].tau_ps) < std::llabs(best.tau_ps));
    if (better) {
      best = DipEstimate{j, curve[j].tau_ps, curve[j].g2, mean};
      have = true;
    }
  }
  if (!have) throw ContractError("find_dip: no bins inside the search limit");
  return best;
}

DelayHistogram start_stop_histogram(std::span<const TimeTag> sync, std::span<const TimeTag> detector,
                                    const StartStopConfig& cfg) {
  if (cfg.bin_width_ps <= 0 || cfg.range_ps <= 0) throw ContractError("start_stop_histogram: invalid layout");
  require_time_ordered(sync, "start_stop_histogram");
  require_time_ordered(detector, "start_stop_histogram");
  DelayHistogram h;
  h.config = cfg;
  h.counts.assign(static_cast<std::size_t>((cfg.range_ps + cfg.bin_width_ps - 1) / cfg.bin_width_ps), 0);
  std::size_t j = 0;
  for (const auto& s : sync) {
    ++h.starts;
    while (j < detector.size() && detector[j].timestamp < s.timestamp) ++j;
    if (j == detector.size()) continue;
    const Picoseconds delay = detector[j].timestamp - s.timestamp;
    if (delay < cfg.range_ps) ++h.counts[static_cast<std::size_t>(delay / cfg.bin_width_ps)];
  }
  return h;
}

}  // namespace qfc
