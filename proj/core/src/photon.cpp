#include "qfc/photon.hpp"

#include <algorithm>
#include <string>

#include "qfc/error.hpp"

namespace qfc {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::signal: return "signal";
    case Origin::background: return "background";
    case Origin::converter_noise: return "converter_noise";
    case Origin::dark: return "dark";
  }
  return "unknown";
}

bool is_time_ordered(std::span<const PhotonEvent> stream) {
  return std::is_sorted(stream.begin(), stream.end(),
                        [](const PhotonEvent& a, const PhotonEvent& b) { return a.timestamp < b.timestamp; });
}

bool is_time_ordered(std::span<const TimeTag> tags) {
  return std::is_sorted(tags.begin(), tags.end(),
                        [](const TimeTag& a, const TimeTag& b) { return a.timestamp < b.timestamp; });
}

void require_time_ordered(std::span<const PhotonEvent> stream, std::string_view what) {
  if (!is_time_ordered(stream)) throw ContractError(std::string(what) + ": photon stream is not time-ordered");
}

void require_time_ordered(std::span<const TimeTag> tags, std::string_view what) {
  if (!is_time_ordered(tags)) throw ContractError(std::string(what) + ": tag list is not time-ordered");
}

OriginCounts count_origins(std::span<const PhotonEvent> stream) {
  OriginCounts counts{};
  for (const auto& e : stream) ++counts[static_cast<std::size_t>(e.origin)];
  return counts;
}

}  // namespace qfc
