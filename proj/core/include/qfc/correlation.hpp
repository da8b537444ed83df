#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfc/photon.hpp"

namespace qfc {

/// Histogram layout for coincidence correlation. Bins are centred on multiples of
/// bin_width_ps, so tau = 0 sits at a bin centre; bin centres span [-window, +window].
struct CorrelationConfig {
  Picoseconds bin_width_ps = 512;
  Picoseconds window_ps = 512 * 100;

  std::size_t half_bins() const { return static_cast<std::size_t>(window_ps / bin_width_ps); }
  std::size_t bin_count() const { return 2 * half_bins() + 1; }
  /// Largest |tau| that still lands in an edge bin.
  Picoseconds reach_ps() const { return (bin_width_ps * static_cast<Picoseconds>(2 * half_bins() + 1) - 1) / 2; }
};

void validate(const CorrelationConfig& cfg);

/// Signed bin offset of a lag. Lags exactly on a bin edge round away from zero, which keeps
/// hist(A,B)[+k] == hist(B,A)[-k] for integer timestamps.
inline std::int64_t lag_bin(Picoseconds tau, Picoseconds bin_width) {
  const Picoseconds mag = tau < 0 ? -tau : tau;
  const std::int64_t k = (2 * mag + bin_width) / (2 * bin_width);
  return tau < 0 ? -k : k;
}

/// Time interval during which a channel was acquiring.
struct AcquisitionSpan {
  Picoseconds start_ps = 0;
  Picoseconds stop_ps = 0;
};

struct CorrelationHistogram {
  CorrelationConfig config;
  std::vector<std::uint64_t> counts;
  std::uint64_t tags_a = 0;  ///< tags of channel A inside the overlap span
  std::uint64_t tags_b = 0;
  double t_int_s = 0.0;      ///< overlap of the two acquisition spans
  double rate_a_hz = 0.0;    ///< N1
  double rate_b_hz = 0.0;    ///< N2

  std::size_t center_index() const { return config.half_bins(); }
  Picoseconds bin_center_ps(std::size_t j) const {
    return (static_cast<Picoseconds>(j) - static_cast<Picoseconds>(config.half_bins())) * config.bin_width_ps;
  }
  std::uint64_t total() const;
};

/// counts[j] = #{(a, b) : b - a falls in bin j}. Sliding two-index sweep, cost
/// O(|A| + |B| + pairs in window). Acquisition spans are taken from the first and last tags.
CorrelationHistogram cross_correlate(std::span<const TimeTag> a, std::span<const TimeTag> b,
                                     const CorrelationConfig& cfg);

/// Same, with explicit acquisition spans for the rate and t_int bookkeeping.
CorrelationHistogram cross_correlate(std::span<const TimeTag> a, std::span<const TimeTag> b,
                                     const CorrelationConfig& cfg, AcquisitionSpan span_a, AcquisitionSpan span_b);

/// Splits A into `chunks` contiguous pieces, correlates each against the slice of B within
/// reach (the overlap margin), and sums. Identical to cross_correlate. Runs the chunks on up
/// to `threads` threads (0 = hardware concurrency).
CorrelationHistogram cross_correlate_chunked(std::span<const TimeTag> a, std::span<const TimeTag> b,
                                             const CorrelationConfig& cfg, AcquisitionSpan span_a,
                                             AcquisitionSpan span_b, std::size_t chunks, unsigned threads = 0);

struct G2Point {
  Picoseconds tau_ps = 0;
  std::uint64_t counts = 0;
  double g2 = 0.0;
};

/// g2(tau) = G2(tau) / (N1 N2 t_bin t_int). Throws NormalizationError on zero rate or t_int.
std::vector<G2Point> normalize_g2(const CorrelationHistogram& hist);

/// Normalization shared by independent runs: sum of counts over the sum of the
/// per-run N1 N2 t_bin t_int.
std::vector<G2Point> normalize_pooled(std::span<const CorrelationHistogram> hists);

/// Denominator N1 N2 t_bin t_int of one histogram.
double poisson_expectation_per_bin(const CorrelationHistogram& hist);

/// Value of the bin containing `tau_ps` (default the zero-lag bin). Throws ContractError
/// when tau lies outside the curve.
double g2_zero(std::span<const G2Point> curve, Picoseconds bin_width_ps, Picoseconds tau_ps = 0);

struct DipEstimate {
  std::size_t index = 0;
  Picoseconds tau_ps = 0;
  double g2 = 0.0;        ///< unsmoothed value at the dip bin
  double smoothed = 0.0;  ///< running mean over `smoothing` bins at the dip
};

/// Arg-min of the curve after a centred running mean over `smoothing` bins (odd).
/// Ties go to the smallest |tau|. Only bins with |tau| <= search_limit_ps are considered
/// when search_limit_ps > 0.
DipEstimate find_dip(std::span<const G2Point> curve, std::size_t smoothing = 3, Picoseconds search_limit_ps = 0);

/// Start-stop histogram configuration: bins [j w, (j+1) w) over [0, range).
struct StartStopConfig {
  Picoseconds bin_width_ps = 64;
  Picoseconds range_ps = 12500;
};

struct DelayHistogram {
  StartStopConfig config;
  std::vector<std::uint64_t> counts;
  std::uint64_t starts = 0;

  double bin_center_ps(std::size_t j) const {
    return (static_cast<double>(j) + 0.5) * static_cast<double>(config.bin_width_ps);
  }
};

/// For every sync tag, the delay to the first detector tag at or after it, if shorter than
/// the range.
DelayHistogram start_stop_histogram(std::span<const TimeTag> sync, std::span<const TimeTag> detector,
                                    const StartStopConfig& cfg);

}  // namespace qfc
