#include <gtest/gtest.h>

#include <cmath>

#include "qfc/emitter.hpp"
#include "qfc/error.hpp"
#include "qfc/optics.hpp"
#include "support.hpp"

namespace qfc {
namespace {

TEST(Dfg, EnergyConservationAtSourceAndPumpWavelengths) {
  const double out = dfg_output_wavelength(710.74, 1549.90);
  EXPECT_NEAR(out, 1312.71, 0.02);
  EXPECT_GE(out, 1312.68);
  EXPECT_LE(out, 1312.72);
  EXPECT_DOUBLE_EQ(dfg_output_wavelength(700.0, 1400.0), 1400.0);
}

TEST(Dfg, RoundTripRecoversInput) {
  Rng rng(61);
  for (int i = 0; i < 1000; ++i) {
    const double in = rng.uniform(500.0, 1000.0);
    const double pump = rng.uniform(1100.0, 2000.0);
    const double out = dfg_output_wavelength(in, pump);
    const double back = 1.0 / (1.0 / out + 1.0 / pump);
    ASSERT_NEAR(back, in, 1e-12 * in);
  }
}

TEST(Dfg, UpConversionIsADomainError) {
  EXPECT_THROW(dfg_output_wavelength(1600.0, 1549.9), DomainError);
  EXPECT_THROW(dfg_output_wavelength(0.0, 1549.9), DomainError);
}

TEST(Conversion, ZeroPumpConvertsNothing) {
  PumpConfig pump;
  pump.power_w = 0.0;
  EXPECT_EQ(conversion_probability(pump, ConversionSpec{}), 0.0);
}

TEST(Conversion, MaximumAtOptimalPump) {
  const ConversionSpec spec;
  const double p_opt = optimal_pump_power(spec);
  EXPECT_NEAR(p_opt, 0.1341, 1e-4);
  PumpConfig pump;
  pump.power_w = p_opt;
  EXPECT_NEAR(conversion_probability(pump, spec), 0.32, 1e-12);

  // Golden-section maximization of the efficiency curve, independent of the closed form.
  auto f = [&](double p) {
    PumpConfig q;
    q.power_w = p;
    return conversion_probability(q, spec);
  };
  double lo = 0.05, hi = 0.25;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  while (hi - lo > 1e-9) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (f(m1) < f(m2)) lo = m1; else hi = m2;
  }
  EXPECT_NEAR(0.5 * (lo + hi), p_opt, 1e-6);
}

TEST(Conversion, ReferencePumpEfficiency) {
  PumpConfig pump;
  pump.power_w = 0.150;
  const double s = std::sin(std::sqrt(1.15 * 0.150) * 4.0);
  EXPECT_NEAR(conversion_probability(pump, ConversionSpec{}), 0.32 * s * s, 1e-12);
  EXPECT_NEAR(conversion_probability(pump, ConversionSpec{}), 0.317, 0.001);
}

TEST(Conversion, NotMonotoneBeyondOptimum) {
  const ConversionSpec spec;
  PumpConfig a, b;
  a.power_w = optimal_pump_power(spec);
  b.power_w = 1.5 * a.power_w;
  EXPECT_LT(conversion_probability(b, spec), conversion_probability(a, spec));
}

TEST(Acceptance, HalfMaximumAtHalfWidth) {
  const ConversionSpec spec;
  EXPECT_DOUBLE_EQ(acceptance_transmission(0.0, spec), 1.0);
  EXPECT_NEAR(acceptance_transmission(27.3, spec), 0.5, 1e-6);
  EXPECT_NEAR(acceptance_transmission(-27.3, spec), 0.5, 1e-6);
  Rng rng(62);
  for (int i = 0; i < 1000; ++i) {
    const double d = rng.uniform(-500.0, 500.0);
    ASSERT_DOUBLE_EQ(acceptance_transmission(d, spec), acceptance_transmission(-d, spec));
  }
}

TEST(Etalon, AiryValues) {
  const EtalonSpec spec;
  EXPECT_DOUBLE_EQ(etalon_transmission(0.0, spec), 1.0);
  const double c = 2.0 * 42.0 / kPi;
  EXPECT_NEAR(etalon_transmission(925.0, spec), 1.0 / (1.0 + c * c), 1e-15);
  EXPECT_NEAR(etalon_transmission(1850.0, spec), 1.0, 1e-12);
  EXPECT_NEAR(etalon_transmission(300.0, spec), etalon_transmission(300.0 + 3 * 1850.0, spec), 1e-9);
}

TEST(Fbg, BandValues) {
  const FbgSpec spec;
  EXPECT_DOUBLE_EQ(fbg_band_transmission(1312.714, spec), 0.79);
  EXPECT_DOUBLE_EQ(fbg_band_transmission(1313.5, spec), 1e-3);
  EXPECT_DOUBLE_EQ(fbg_band_transmission(1312.714 + 0.377, spec), 0.79);
}

TEST(Transmissions, AlwaysInUnitInterval) {
  Rng rng(63);
  const ConversionSpec conv;
  const EtalonSpec etalon;
  const FbgSpec fbg;
  for (int i = 0; i < 10000; ++i) {
    const double d = rng.uniform(-1e5, 1e5);
    PumpConfig pump;
    pump.power_w = rng.uniform(0.0, 5.0);
    for (double t : {acceptance_transmission(d, conv), etalon_transmission(d, etalon),
                     fbg_band_transmission(1312.0 + d * 1e-5, fbg), conversion_probability(pump, conv)}) {
      ASSERT_GE(t, 0.0);
      ASSERT_LE(t, 1.0);
    }
  }
}

TEST(Coherence, LinewidthsAdd) {
  EXPECT_NEAR(converted_coherence_time(42.0, 1e12), 42.0, 1e-6);
  EXPECT_DOUBLE_EQ(converted_coherence_time(100.0, 100.0), 50.0);
  EXPECT_NEAR(converted_coherence_time(42.0, 1.6e8), 41.99999, 1e-5);
  EXPECT_THROW(converted_coherence_time(0.0, 1.0), ContractError);
}

PhotonStream signal_events(std::size_t n) {
  PhotonStream s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = PhotonEvent{static_cast<Picoseconds>(i) * 1000, 710.74f, Origin::signal};
  return s;
}

TEST(Filter, IdentityAndBlock) {
  const auto s = signal_events(10000);
  EXPECT_EQ(apply_filter(s, [](const PhotonEvent&) { return 1.0; }, 1), s);
  EXPECT_TRUE(apply_filter(s, [](const PhotonEvent&) { return 0.0; }, 1).empty());
}

TEST(Filter, HalfTransmissionIsBinomial) {
  const auto s = signal_events(1000000);
  const auto out = apply_filter(s, [](const PhotonEvent&) { return 0.5; }, 2);
  EXPECT_NEAR(static_cast<double>(out.size()), 5e5, 4.0 * std::sqrt(2.5e5));
  EXPECT_TRUE(is_time_ordered(std::span<const PhotonEvent>(out)));
}

TEST(Filter, OutOfRangeTransmissionIsAContractError) {
  const auto s = signal_events(10);
  EXPECT_THROW(apply_filter(s, [](const PhotonEvent&) { return 1.2; }, 3), ContractError);
}

TEST(ConvertStream, ZeroPumpIsEmpty) {
  PumpConfig pump;
  pump.power_w = 0.0;
  EXPECT_TRUE(convert_stream(signal_events(10000), pump, ConversionSpec{}, 1.0, 4).empty());
}

TEST(ConvertStream, ThinsSignalAndAddsNoiseOnly) {
  const EmitterConfig src = calibrate_brightness(EmitterConfig{});
  const auto in = generate_signal_stream(src, 10.0, 71);
  for (double power : {0.1341, 0.150}) {
    PumpConfig pump;
    pump.power_w = power;
    const auto out = convert_stream(in, pump, ConversionSpec{}, 10.0, 72);
    const auto counts = count_origins(out);
    const auto sig = counts[static_cast<std::size_t>(Origin::signal)];
    EXPECT_LE(sig, in.size());
    EXPECT_EQ(counts[static_cast<std::size_t>(Origin::background)], 0u);
    EXPECT_EQ(sig + counts[static_cast<std::size_t>(Origin::converter_noise)], out.size());
    EXPECT_NEAR(static_cast<double>(sig) / static_cast<double>(in.size()), 0.32, 0.01);
    EXPECT_TRUE(is_time_ordered(std::span<const PhotonEvent>(out)));
    if (power == 0.150) EXPECT_GE(stream_snr(out), 20.0);
  }
}

TEST(ConvertStream, Deterministic) {
  const auto in = generate_signal_stream(calibrate_brightness(EmitterConfig{}), 0.2, 73);
  const PumpConfig pump;
  EXPECT_EQ(convert_stream(in, pump, ConversionSpec{}, 0.2, 5), convert_stream(in, pump, ConversionSpec{}, 0.2, 5));
}

TEST(ConvertStream, OutputWavelengthIsTelecom) {
  const auto in = generate_signal_stream(calibrate_brightness(EmitterConfig{}), 0.05, 74);
  for (const auto& e : convert_stream(in, PumpConfig{}, ConversionSpec{}, 0.05, 6)) {
    ASSERT_NEAR(e.wavelength_nm, 1312.71, 0.02);
  }
}

}  // namespace
}  // namespace qfc
