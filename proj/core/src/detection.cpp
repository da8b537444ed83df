#include "qfc/detection.hpp"

#include <algorithm>
#include <cmath>

#include "qfc/emitter.hpp"
#include "qfc/error.hpp"
#include "qfc/random.hpp"
#include "qfc/units.hpp"

namespace qfc {

namespace {

bool by_time(const TimeTag& a, const TimeTag& b) { return a.timestamp < b.timestamp; }

}  // namespace

DetectorSpec si_apd(std::uint8_t channel) {
  return DetectorSpec{0.65, 300.0, 250.0, 0, "si-apd", channel};
}

DetectorSpec sspd(std::uint8_t channel) {
  return DetectorSpec{0.122, 10.0, 25.0, 0, "sspd", channel};
}

void validate(const DetectorSpec& s) {
  if (!(s.efficiency >= 0.0 && s.efficiency <= 1.0)) throw ConfigError("detector: efficiency outside [0,1]");
  if (!(s.dark_rate_hz >= 0.0)) throw ConfigError("detector: dark rate must be non-negative");
  if (!(s.jitter_sigma_ps >= 0.0)) throw ConfigError("detector: jitter must be non-negative");
  if (s.dead_time_ps < 0) throw ConfigError("detector: dead time must be non-negative");
}

std::pair<PhotonStream, PhotonStream> beamsplitter(const PhotonStream& stream, double ratio, std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ContractError("beamsplitter: ratio outside [0,1]");
  require_time_ordered(stream, "beamsplitter");
  Rng rng(seed);
  std::pair<PhotonStream, PhotonStream> out;
  out.first.reserve(static_cast<std::size_t>(static_cast<double>(stream.size()) * ratio * 1.01) + 16);
  out.second.reserve(static_cast<std::size_t>(static_cast<double>(stream.size()) * (1.0 - ratio) * 1.01) + 16);
  for (const auto& e : stream) {
    (rng.uniform() < ratio ? out.first : out.second).push_back(e);
  }
  return out;
}

PhotonStream delay_line(const PhotonStream& stream, Picoseconds delay_ps) {
  PhotonStream out = stream;
  for (auto& e : out) e.timestamp += delay_ps;
  return out;
}

TagList delay_tags(const TagList& tags, Picoseconds delay_ps) {
  TagList out = tags;
  for (auto& t : out) t.timestamp += delay_ps;
  return out;
}

TagList detect(const PhotonStream& stream, const DetectorSpec& spec, double duration_s, std::uint64_t seed) {
  validate(spec);
  require_time_ordered(stream, "detect");
  Rng thin(derive_seed(seed, "detect.efficiency"));
  Rng jitter(derive_seed(seed, "detect.jitter"));

  TagList tags;
  tags.reserve(static_cast<std::size_t>(static_cast<double>(stream.size()) * spec.efficiency * 1.01 +
                                        spec.dark_rate_hz * duration_s * 1.1) + 16);
  for (const auto& e : stream) {
    if (!(thin.uniform() < spec.efficiency)) continue;
    double t = static_cast<double>(e.timestamp);
    if (spec.jitter_sigma_ps > 0.0) t += jitter.normal(0.0, spec.jitter_sigma_ps);
    tags.push_back(TimeTag{round_to_ps(t), spec.channel});
  }

  if (spec.dark_rate_hz > 0.0 && duration_s > 0.0) {
    const auto darks = generate_poisson_stream(spec.dark_rate_hz, WavelengthBand{}, duration_s, Origin::dark,
                                               derive_seed(seed, "detect.dark"));
    for (const auto& d : darks) tags.push_back(TimeTag{d.timestamp, spec.channel});
  }
  std::stable_sort(tags.begin(), tags.end(), by_time);

  if (spec.dead_time_ps > 0 && !tags.empty()) {
    TagList kept;
    kept.reserve(tags.size());
    kept.push_back(tags.front());
    for (std::size_t i = 1; i < tags.size(); ++i) {
      if (tags[i].timestamp - kept.back().timestamp >= spec.dead_time_ps) kept.push_back(tags[i]);
    }
    return kept;
  }
  return tags;
}

std::pair<TagList, TagList> add_crosstalk_bursts(const TagList& a, const TagList& b, double burst_rate_hz,
                                                 int pulses_per_burst, Picoseconds spacing_ps, double duration_s,
                                                 std::uint64_t seed) {
  require_time_ordered(a, "add_crosstalk_bursts");
  require_time_ordered(b, "add_crosstalk_bursts");
  if (pulses_per_burst < 1) throw ContractError("add_crosstalk_bursts: need at least one pulse per burst");
  std::pair<TagList, TagList> out{a, b};
  if (burst_rate_hz <= 0.0) return out;
  const auto starts = generate_poisson_stream(burst_rate_hz, WavelengthBand{}, duration_s, Origin::dark, seed);
  const std::uint8_t ch_a = a.empty() ? 0 : a.front().channel;
  const std::uint8_t ch_b = b.empty() ? 1 : b.front().channel;
  for (const auto& s : starts) {
    for (int k = 0; k < pulses_per_burst; ++k) {
      const Picoseconds t = s.timestamp + k * spacing_ps;
      out.first.push_back(TimeTag{t, ch_a});
      out.second.push_back(TimeTag{t, ch_b});
    }
  }
  std::stable_sort(out.first.begin(), out.first.end(), by_time);
  std::stable_sort(out.second.begin(), out.second.end(), by_time);
  return out;
}

std::pair<TagList, TagList> discard_crosstalk_bursts(const TagList& a, const TagList& b, Picoseconds epsilon_ps) {
  require_time_ordered(a, "discard_crosstalk_bursts");
  require_time_ordered(b, "discard_crosstalk_bursts");
  if (epsilon_ps < 0) throw ContractError("discard_crosstalk_bursts: epsilon must be non-negative");
  std::vector<bool> drop_a(a.size(), false);
  std::vector<bool> drop_b(b.size(), false);
  std::size_t lo = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Picoseconds t = a[i].timestamp;
    while (lo < b.size() && b[lo].timestamp < t - epsilon_ps) ++lo;
    for (std::size_t j = lo; j < b.size() && b[j].timestamp <= t + epsilon_ps; ++j) {
      drop_a[i] = true;
      drop_b[j] = true;
    }
  }
  std::pair<TagList, TagList> out;
  out.first.reserve(a.size());
  out.second.reserve(b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!drop_a[i]) out.first.push_back(a[i]);
  for (std::size_t j = 0; j < b.size(); ++j)
    if (!drop_b[j]) out.second.push_back(b[j]);
  return out;
}

}  // namespace qfc
