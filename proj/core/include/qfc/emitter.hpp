#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfc/photon.hpp"
#include "qfc/random.hpp"

namespace qfc {

/// How the quantum dot is driven.
///  - pulsed: one excitation attempt per laser pulse, at most one photon per pulse.
///  - continuous: incoherently pumped two-level emitter (DC electrical injection). After each
///    emission the dot waits Exp(excitation_time) to be re-excited, then decays with
///    lifetime_fast. Its intensity correlation is 1 - exp(-|tau|/tau_d) with
///    1/tau_d = 1/excitation_time + 1/lifetime_fast.
enum class Excitation { pulsed, continuous };

struct SpectralLine {
  double center_nm = 710.74;
  double relative_intensity = 1.0;
  std::string label = "X";
};

struct WavelengthBand {
  double low_nm = 0.0;
  double high_nm = 0.0;
};

struct EmitterConfig {
  Excitation excitation = Excitation::pulsed;
  double rep_rate_hz = 80e6;
  /// Probability that an excitation cycle yields a photon in the single-mode fibre.
  /// Normally set by calibrate_brightness() from collected_rate_target_hz.
  double emission_prob = 188400.0 / 80e6;
  double lifetime_fast_ps = 2600.0;
  double refill_tau_ps = 2.5e6;
  double refill_weight = 0.05;
  /// Mean re-excitation wait in continuous mode.
  double excitation_time_ps = 2480.0;
  double coherence_time_ps = 42.0;
  std::vector<SpectralLine> lines{SpectralLine{}};
  /// Uncorrelated background at the conversion-stage input, 7:1 below the signal.
  double background_rate_hz = 188400.0 / 7.0;
  WavelengthBand background_band{710.74 - 0.1875, 710.74 + 0.1875};
  double collected_rate_target_hz = 188400.0;
};

/// Throws ConfigError when an invariant of the config does not hold.
void validate(const EmitterConfig& config);

/// Excitation cycles per second: rep_rate for pulsed, 1/(excitation_time + lifetime_fast)
/// for continuous.
double cycle_rate_hz(const EmitterConfig& config);

/// Returns a copy with emission_prob = collected_rate_target / cycle rate.
EmitterConfig calibrate_brightness(EmitterConfig config);

/// Delay from excitation to emission: (1-w) Exp(lifetime_fast) + w Exp(refill_tau).
double sample_emission_delay(const EmitterConfig& config, Rng& rng);

struct GenerationStats {
  std::uint64_t cycles = 0;     ///< excitation pulses (pulsed) or cycles (continuous) spanned
  std::uint64_t emitted = 0;    ///< photons emitted into the fibre
  std::uint64_t truncated = 0;  ///< emitted photons whose timestamp fell beyond the duration
};

/// Default cap on events per generated stream (16 bytes each).
inline constexpr std::size_t kDefaultMaxEvents = 200'000'000;

/// Signal photons of the quantum dot over [0, duration]. Pulsed mode emits at most one
/// photon per pulse k/rep_rate; wavelengths are drawn from `lines` by weight.
PhotonStream generate_signal_stream(const EmitterConfig& config, double duration_s, std::uint64_t seed,
                                    GenerationStats* stats = nullptr,
                                    std::size_t max_events = kDefaultMaxEvents);

/// Homogeneous Poisson stream with wavelengths uniform in `band`.
PhotonStream generate_poisson_stream(double rate_hz, WavelengthBand band, double duration_s, Origin origin,
                                     std::uint64_t seed, std::size_t max_events = kDefaultMaxEvents);

PhotonStream generate_background_stream(double rate_hz, WavelengthBand band, double duration_s,
                                        std::uint64_t seed);

/// Time-ordered union. Ties keep input order: earlier stream first, then original order.
PhotonStream merge_streams(std::span<const PhotonStream> streams);
PhotonStream merge_streams(const PhotonStream& a, const PhotonStream& b);

/// count(signal) / count(noise origins). +infinity when the stream holds only signal.
/// Throws ContractError on an empty stream.
double stream_snr(std::span<const PhotonEvent> stream);

}  // namespace qfc
