#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qfc/units.hpp"

namespace qfc {

enum class Origin : std::uint8_t { signal = 0, background = 1, converter_noise = 2, dark = 3 };

std::string_view to_string(Origin origin);

/// A single photon in flight. Wavelength is stored in single precision (about 36 MHz
/// resolution at 711 nm), which keeps the event at 16 bytes.
struct PhotonEvent {
  Picoseconds timestamp = 0;
  float wavelength_nm = 0.0f;
  Origin origin = Origin::signal;

  friend bool operator==(const PhotonEvent&, const PhotonEvent&) = default;
};

using PhotonStream = std::vector<PhotonEvent>;

/// A detector time tag as stored by the TCSPC electronics.
struct TimeTag {
  Picoseconds timestamp = 0;
  std::uint8_t channel = 0;

  friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

using TagList = std::vector<TimeTag>;

bool is_time_ordered(std::span<const PhotonEvent> stream);
bool is_time_ordered(std::span<const TimeTag> tags);

/// Throws ContractError naming `what` if the input is not sorted by timestamp.
void require_time_ordered(std::span<const PhotonEvent> stream, std::string_view what);
void require_time_ordered(std::span<const TimeTag> tags, std::string_view what);

/// Event counts per origin, indexed by the Origin value.
using OriginCounts = std::array<std::size_t, 4>;
OriginCounts count_origins(std::span<const PhotonEvent> stream);

}  // namespace qfc
