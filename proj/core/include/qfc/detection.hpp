#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "qfc/photon.hpp"

namespace qfc {

struct DetectorSpec {
  double efficiency = 0.65;
  double dark_rate_hz = 300.0;
  double jitter_sigma_ps = 250.0;
  Picoseconds dead_time_ps = 0;
  std::string label = "si-apd";
  std::uint8_t channel = 0;
};

/// Si-APD (SPCM-AQR-14): 65 % efficiency near 700 nm, ~300 dark counts/s, 250 ps jitter.
DetectorSpec si_apd(std::uint8_t channel);
/// NbN SSPD: 12.2 % efficiency at 1310 nm, 10 dark counts/s, 25 ps jitter.
DetectorSpec sspd(std::uint8_t channel);

void validate(const DetectorSpec& spec);

/// Routes each event to the first output with probability `ratio`, else to the second.
std::pair<PhotonStream, PhotonStream> beamsplitter(const PhotonStream& stream, double ratio, std::uint64_t seed);

/// Shifts every timestamp by `delay_ps` (may be negative).
PhotonStream delay_line(const PhotonStream& stream, Picoseconds delay_ps);
TagList delay_tags(const TagList& tags, Picoseconds delay_ps);

/// Efficiency thinning, Gaussian jitter (continuous, rounded half-to-even), Poisson dark counts
/// over [0, duration], re-sort, then optional non-paralyzable dead time.
/// Jittered tags may fall slightly below 0; they are kept.
TagList detect(const PhotonStream& stream, const DetectorSpec& spec, double duration_s, std::uint64_t seed);

/// Inserts simultaneous pulse bursts into both channels, the CFD cross-talk artifact of the
/// SSPD electronics. Each burst puts `pulses_per_burst` tags spaced `spacing_ps` apart on both
/// channels at identical times.
std::pair<TagList, TagList> add_crosstalk_bursts(const TagList& a, const TagList& b, double burst_rate_hz,
                                                 int pulses_per_burst, Picoseconds spacing_ps, double duration_s,
                                                 std::uint64_t seed);

/// Removes every tag that has a partner on the other channel within +-epsilon.
std::pair<TagList, TagList> discard_crosstalk_bursts(const TagList& a, const TagList& b, Picoseconds epsilon_ps);

}  // namespace qfc
