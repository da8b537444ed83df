#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qfc/emitter.hpp"
#include "qfc/error.hpp"
#include "support.hpp"

namespace qfc {
namespace {

EmitterConfig pulsed_default() { return calibrate_brightness(EmitterConfig{}); }

TEST(EmissionDelay, FastBranchMeanIsLifetime) {
  EmitterConfig cfg;
  cfg.refill_weight = 0.0;
  Rng rng(11);
  const int n = 1000000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += sample_emission_delay(cfg, rng);
  EXPECT_NEAR(s / n, 2600.0, 3.0 * 2600.0 / std::sqrt(n));
}

TEST(EmissionDelay, PureRefillMeanIsRefillTime) {
  EmitterConfig cfg;
  cfg.refill_weight = 1.0;
  Rng rng(12);
  const int n = 1000000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += sample_emission_delay(cfg, rng);
  EXPECT_NEAR(s / n, 2.5e6, 3.0 * 2.5e6 / std::sqrt(n));
}

TEST(EmissionDelay, FastBranchIsExponential) {
  EmitterConfig cfg;
  cfg.refill_weight = 0.0;
  Rng rng(13);
  std::vector<double> x(100000);
  for (auto& v : x) v = sample_emission_delay(cfg, rng);
  const double d = test::ks_statistic(x, [](double t) { return 1.0 - std::exp(-t / 2600.0); });
  EXPECT_LT(d, test::ks_critical_01(x.size()));
}

TEST(EmissionDelay, MixtureMatchesBiexponentialDensity) {
  EmitterConfig cfg;
  Rng rng(14);
  const int n = 1000000;
  const double w = cfg.refill_weight;
  auto cdf = [&](double t) {
    return 1.0 - (1.0 - w) * std::exp(-t / cfg.lifetime_fast_ps) - w * std::exp(-t / cfg.refill_tau_ps);
  };
  // Log-spaced bins cover both time scales; Pearson chi^2 against the exact bin integrals.
  std::vector<double> edges{0.0};
  for (double e = 10.0; e < 1.5e7; e *= 1.25) edges.push_back(e);
  edges.push_back(1e300);
  std::vector<double> observed(edges.size() - 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double t = sample_emission_delay(cfg, rng);
    const auto it = std::upper_bound(edges.begin(), edges.end(), t);
    observed[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
  }
  double chi2 = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const double expected = n * (cdf(edges[j + 1]) - cdf(edges[j]));
    chi2 += (observed[j] - expected) * (observed[j] - expected) / expected;
  }
  EXPECT_LT(chi2 / static_cast<double>(observed.size() - 1), 1.5);
}

TEST(SignalStream, CertainEmissionGivesOnePhotonPerPulse) {
  EmitterConfig cfg;
  cfg.emission_prob = 1.0;
  GenerationStats stats;
  const auto s = generate_signal_stream(cfg, 1e-6, 21, &stats);
  EXPECT_EQ(stats.emitted, 80u);
  EXPECT_EQ(stats.cycles, 80u);
  EXPECT_EQ(s.size() + stats.truncated, 80u);
}

TEST(SignalStream, CalibratedRateMatchesTarget) {
  for (auto mode : {Excitation::pulsed, Excitation::continuous}) {
    EmitterConfig cfg;
    cfg.excitation = mode;
    cfg = calibrate_brightness(cfg);
    const auto s = generate_signal_stream(cfg, 1.0, 22);
    EXPECT_NEAR(static_cast<double>(s.size()), 188400.0, 1884.0);
  }
}

TEST(SignalStream, SameSeedIsIdentical) {
  const auto cfg = pulsed_default();
  EXPECT_EQ(generate_signal_stream(cfg, 0.05, 23), generate_signal_stream(cfg, 0.05, 23));
  EXPECT_NE(generate_signal_stream(cfg, 0.05, 23), generate_signal_stream(cfg, 0.05, 24));
}

TEST(SignalStream, SortedAndInsideDuration) {
  const auto cfg = pulsed_default();
  const auto s = generate_signal_stream(cfg, 0.2, 25);
  EXPECT_TRUE(is_time_ordered(std::span<const PhotonEvent>(s)));
  for (const auto& e : s) {
    ASSERT_GE(e.timestamp, 0);
    ASSERT_LE(e.timestamp, 200'000'000'000);
    ASSERT_EQ(e.origin, Origin::signal);
  }
}

TEST(SignalStream, AtMostOnePhotonPerPulse) {
  EmitterConfig cfg;
  cfg.emission_prob = 0.7;
  cfg.lifetime_fast_ps = 1.0;
  cfg.refill_weight = 0.0;
  const auto s = generate_signal_stream(cfg, 1e-4, 26);
  std::set<Picoseconds> pulses;
  for (const auto& e : s) EXPECT_TRUE(pulses.insert(e.timestamp / 12500).second);
  EXPECT_NEAR(static_cast<double>(s.size()), 0.7 * 8000, 4.0 * std::sqrt(8000 * 0.21));
}

TEST(SignalStream, LinesDrawnByWeight) {
  EmitterConfig cfg = pulsed_default();
  cfg.lines = {SpectralLine{710.74, 3.0, "X"}, SpectralLine{705.0, 1.0, "XX"}};
  const auto s = generate_signal_stream(cfg, 0.5, 27);
  std::size_t second = 0;
  for (const auto& e : s) second += std::abs(e.wavelength_nm - 705.0f) < 1e-3f ? 1 : 0;
  const double n = static_cast<double>(s.size());
  EXPECT_NEAR(static_cast<double>(second) / n, 0.25, 4.0 * std::sqrt(0.1875 / n));
}

TEST(SignalStream, CapacityIsEnforced) {
  EXPECT_THROW(generate_signal_stream(pulsed_default(), 1.0, 28, nullptr, 1000), CapacityError);
}

TEST(EmitterConfig, InvalidValuesAreRejected) {
  EmitterConfig cfg;
  cfg.lifetime_fast_ps = 3e6;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = EmitterConfig{};
  cfg.emission_prob = 1.5;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = EmitterConfig{};
  cfg.lines = {SpectralLine{780.0, 1.0, "far"}};
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = EmitterConfig{};
  cfg.collected_rate_target_hz = 1e9;
  EXPECT_THROW(calibrate_brightness(cfg), ConfigError);
}

TEST(BackgroundStream, ZeroRateIsEmpty) {
  EXPECT_TRUE(generate_background_stream(0.0, {710.0, 711.0}, 1.0, 31).empty());
}

TEST(BackgroundStream, RateAndExponentialGaps) {
  const auto s = generate_background_stream(1e4, {710.0, 711.0}, 10.0, 32);
  EXPECT_NEAR(static_cast<double>(s.size()), 1e5, 4.0 * std::sqrt(1e5));
  std::vector<double> gaps;
  for (std::size_t i = 1; i < s.size(); ++i) gaps.push_back(static_cast<double>(s[i].timestamp - s[i - 1].timestamp));
  const double d = test::ks_statistic(gaps, [](double t) { return 1.0 - std::exp(-t / 1e8); });
  EXPECT_LT(d, test::ks_critical_01(gaps.size()));
  for (const auto& e : s) {
    ASSERT_EQ(e.origin, Origin::background);
    ASSERT_GE(e.wavelength_nm, 710.0f);
    ASSERT_LE(e.wavelength_nm, 711.0f);
  }
}

TEST(Merge, EmptyIsIdentity) {
  const auto s = generate_background_stream(1e5, {710.0, 711.0}, 0.01, 41);
  EXPECT_EQ(merge_streams(s, PhotonStream{}), s);
  EXPECT_EQ(merge_streams(PhotonStream{}, s), s);
}

TEST(Merge, SortedUnionWithStableTies) {
  const auto a = generate_background_stream(5e5, {710.0, 711.0}, 1.0, 42);
  const auto b = generate_signal_stream(pulsed_default(), 1.0, 43);
  const auto m = merge_streams(a, b);
  EXPECT_EQ(m.size(), a.size() + b.size());
  EXPECT_TRUE(is_time_ordered(std::span<const PhotonEvent>(m)));

  const PhotonStream x{{5, 710.0f, Origin::background}};
  const PhotonStream y{{5, 710.0f, Origin::signal}};
  const auto tie = merge_streams(x, y);
  EXPECT_EQ(tie[0].origin, Origin::background);
  EXPECT_EQ(tie[1].origin, Origin::signal);
}

TEST(Merge, UnsortedInputIsAContractError) {
  const PhotonStream bad{{10, 710.0f, Origin::signal}, {5, 710.0f, Origin::signal}};
  EXPECT_THROW(merge_streams(bad, PhotonStream{}), ContractError);
}

TEST(StreamSnr, Examples) {
  PhotonStream s(700, PhotonEvent{0, 710.0f, Origin::signal});
  EXPECT_TRUE(std::isinf(stream_snr(s)));
  s.insert(s.end(), 100, PhotonEvent{0, 710.0f, Origin::background});
  EXPECT_DOUBLE_EQ(stream_snr(s), 7.0);
  EXPECT_THROW(stream_snr(PhotonStream{}), ContractError);
}

TEST(StreamSnr, DefaultSourceIsSevenToOne) {
  const EmitterConfig cfg = pulsed_default();
  const auto sig = generate_signal_stream(cfg, 1.0, 51);
  const auto bg = generate_background_stream(cfg.background_rate_hz, cfg.background_band, 1.0, 52);
  EXPECT_NEAR(stream_snr(merge_streams(sig, bg)), 7.0, 0.5);
}

}  // namespace
}  // namespace qfc
