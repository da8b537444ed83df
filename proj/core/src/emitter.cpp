#include "qfc/emitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qfc/error.hpp"
#include "qfc/units.hpp"

namespace qfc {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("emitter: " + message);
}

void check_capacity(double expected, std::size_t cap, const char* what) {
  // Allow some headroom above the mean before refusing.
  if (expected > static_cast<double>(cap)) {
    throw CapacityError(std::string(what) + ": expected " + std::to_string(static_cast<long long>(expected)) +
                        " events exceeds the cap of " + std::to_string(cap));
  }
}

class LinePicker {
 public:
  explicit LinePicker(const std::vector<SpectralLine>& lines) {
    double total = 0.0;
    for (const auto& line : lines) {
      total += line.relative_intensity;
      cumulative_.push_back(total);
      wavelength_.push_back(static_cast<float>(line.center_nm));
    }
    for (auto& c : cumulative_) c /= total;
  }

  float pick(Rng& rng) const {
    if (wavelength_.size() == 1) return wavelength_.front();
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), wavelength_.size() - 1);
    return wavelength_[idx];
  }

 private:
  std::vector<double> cumulative_;
  std::vector<float> wavelength_;
};

}  // namespace

void validate(const EmitterConfig& c) {
  require(c.rep_rate_hz > 0.0, "rep_rate must be positive");
  require(c.emission_prob >= 0.0 && c.emission_prob <= 1.0, "emission_prob must lie in [0,1]");
  require(c.refill_weight >= 0.0 && c.refill_weight <= 1.0, "refill_weight must lie in [0,1]");
  require(c.lifetime_fast_ps > 0.0 && c.refill_tau_ps > 0.0, "lifetimes must be positive");
  require(c.lifetime_fast_ps < c.refill_tau_ps, "lifetime_fast must be shorter than refill_tau");
  require(c.excitation_time_ps > 0.0, "excitation_time must be positive");
  require(c.coherence_time_ps > 0.0, "coherence time must be positive");
  require(c.background_rate_hz >= 0.0, "background_rate must be non-negative");
  require(c.collected_rate_target_hz > 0.0, "collected_rate_target must be positive");
  require(c.background_band.low_nm > 0.0 && c.background_band.low_nm <= c.background_band.high_nm,
          "background band must be a positive, ordered interval");
  require(!c.lines.empty(), "at least one spectral line is required");
  for (const auto& line : c.lines) {
    require(line.relative_intensity > 0.0, "line '" + line.label + "' needs a positive weight");
    require(line.center_nm >= 690.0 && line.center_nm <= 715.0,
            "line '" + line.label + "' lies outside the 690-715 nm source band");
  }
}

double cycle_rate_hz(const EmitterConfig& c) {
  if (c.excitation == Excitation::pulsed) return c.rep_rate_hz;
  return kPicosecondsPerSecond / (c.excitation_time_ps + c.lifetime_fast_ps);
}

EmitterConfig calibrate_brightness(EmitterConfig config) {
  const double p = config.collected_rate_target_hz / cycle_rate_hz(config);
  if (p > 1.0) {
    throw ConfigError("emitter: collected_rate_target " + std::to_string(config.collected_rate_target_hz) +
                      " s^-1 exceeds one photon per excitation cycle");
  }
  config.emission_prob = p;
  return config;
}

double sample_emission_delay(const EmitterConfig& config, Rng& rng) {
  if (config.refill_weight > 0.0 && rng.bernoulli(config.refill_weight)) {
    return rng.exponential(config.refill_tau_ps);
  }
  return rng.exponential(config.lifetime_fast_ps);
}

PhotonStream generate_signal_stream(const EmitterConfig& config, double duration_s, std::uint64_t seed,
                                    GenerationStats* stats, std::size_t max_events) {
  validate(config);
  if (!(duration_s > 0.0)) throw ContractError("generate_signal_stream: duration must be positive");
  const double duration_ps = seconds_to_ps(duration_s);
  const double cycles = duration_s * cycle_rate_hz(config);
  check_capacity(cycles * config.emission_prob, max_events, "generate_signal_stream");

  Rng rng(seed);
  const LinePicker lines(config.lines);
  GenerationStats local;
  PhotonStream out;
  out.reserve(static_cast<std::size_t>(cycles * config.emission_prob * 1.01 + 16));

  auto push = [&](double t_ps) {
    ++local.emitted;
    const Picoseconds ts = round_to_ps(t_ps);
    if (ts > static_cast<Picoseconds>(duration_ps)) {
      ++local.truncated;
      return;
    }
    if (out.size() >= max_events) throw CapacityError("generate_signal_stream: event cap reached");
    out.push_back(PhotonEvent{ts, lines.pick(rng), Origin::signal});
  };

  if (config.emission_prob > 0.0) {
    if (config.excitation == Excitation::pulsed) {
      const double period_ps = kPicosecondsPerSecond / config.rep_rate_hz;
      const auto n_pulses = static_cast<std::uint64_t>(std::ceil(duration_ps / period_ps));
      local.cycles = n_pulses;
      // Skip directly to the next emitting pulse.
      std::uint64_t k = rng.geometric(config.emission_prob) - 1;
      while (k < n_pulses) {
        const double pulse_ps = static_cast<double>(k) * period_ps;
        push(pulse_ps + sample_emission_delay(config, rng));
        const std::uint64_t step = rng.geometric(config.emission_prob);
        if (step > n_pulses) break;
        k += step;
      }
      // Slow-branch delays reorder photons from neighbouring pulses.
      std::stable_sort(out.begin(), out.end(),
                       [](const PhotonEvent& a, const PhotonEvent& b) { return a.timestamp < b.timestamp; });
    } else {
      // Each fibre-coupled photon follows K ~ Geometric(p) full cycles; the cycle lengths sum to
      // Gamma(K, excitation_time) + Gamma(K, lifetime_fast).
      double t = 0.0;
      for (;;) {
        const auto k = rng.geometric(config.emission_prob);
        const double shape = static_cast<double>(k);
        t += rng.gamma(shape) * config.excitation_time_ps + rng.gamma(shape) * config.lifetime_fast_ps;
        local.cycles += k;
        if (t > duration_ps) break;
        push(t);
      }
    }
  }
  if (stats) *stats = local;
  return out;
}

PhotonStream generate_poisson_stream(double rate_hz, WavelengthBand band, double duration_s, Origin origin,
                                     std::uint64_t seed, std::size_t max_events) {
  if (rate_hz < 0.0) throw ContractError("poisson stream: rate must be non-negative");
  if (!(duration_s > 0.0)) throw ContractError("poisson stream: duration must be positive");
  PhotonStream out;
  if (rate_hz == 0.0) return out;
  const double expected = rate_hz * duration_s;
  check_capacity(expected, max_events, "poisson stream");

  Rng rng(seed);
  const double mean_gap_ps = kPicosecondsPerSecond / rate_hz;
  const double duration_ps = seconds_to_ps(duration_s);
  out.reserve(static_cast<std::size_t>(expected + 4.0 * std::sqrt(expected) + 16));
  double t = rng.exponential(mean_gap_ps);
  while (t <= duration_ps) {
    if (out.size() >= max_events) throw CapacityError("poisson stream: event cap reached");
    const double wl = band.high_nm > band.low_nm ? rng.uniform(band.low_nm, band.high_nm) : band.low_nm;
    out.push_back(PhotonEvent{round_to_ps(t), static_cast<float>(wl), origin});
    t += rng.exponential(mean_gap_ps);
  }
  // Rounding can only tie neighbours, never reorder them.
  return out;
}

PhotonStream generate_background_stream(double rate_hz, WavelengthBand band, double duration_s,
                                        std::uint64_t seed) {
  return generate_poisson_stream(rate_hz, band, duration_s, Origin::background, seed);
}

PhotonStream merge_streams(const PhotonStream& a, const PhotonStream& b) {
  require_time_ordered(a, "merge_streams");
  require_time_ordered(b, "merge_streams");
  PhotonStream out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const PhotonEvent& x, const PhotonEvent& y) { return x.timestamp < y.timestamp; });
  return out;
}

PhotonStream merge_streams(std::span<const PhotonStream> streams) {
  PhotonStream out;
  for (const auto& s : streams) out = merge_streams(out, s);
  return out;
}

double stream_snr(std::span<const PhotonEvent> stream) {
  if (stream.empty()) throw ContractError("stream_snr: empty stream has no defined ratio");
  const auto counts = count_origins(stream);
  const auto signal = counts[static_cast<std::size_t>(Origin::signal)];
  const auto noise = stream.size() - signal;
  if (noise == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(signal) / static_cast<double>(noise);
}

}  // namespace qfc
