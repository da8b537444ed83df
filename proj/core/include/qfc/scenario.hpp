#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfc/correlation.hpp"
#include "qfc/detection.hpp"
#include "qfc/emitter.hpp"
#include "qfc/optics.hpp"

namespace qfc {

enum class ScenarioKind { hbt_visible, hbt_converted, hbt_cross, michelson, lifetime, efficiency_sweep };
enum class Branch { visible, converted };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(Branch branch);
ScenarioKind parse_scenario_kind(std::string_view text);
Branch parse_branch(std::string_view text);

struct CrosstalkConfig {
  bool enabled = false;
  double burst_rate_hz = 1.0;
  int pulses_per_burst = 5;
  Picoseconds spacing_ps = 2000;
  Picoseconds discard_epsilon_ps = 50;
};

struct HbtSettings {
  /// Second, finer histogram from the same tags; 0 disables it.
  Picoseconds fine_bin_ps = 0;
  bool save_tags = false;  ///< write the first repeat's tags as qtag files
};

struct CrossSettings {
  Picoseconds arm_delay_ps = 100'000;
};

struct MichelsonSettings {
  std::vector<double> delays_ps{0, 10, 20, 30, 45, 60, 80, 100};
  int phase_steps = 16;
  Branch branch = Branch::visible;
};

struct LifetimeSettings {
  Branch branch = Branch::visible;
  Picoseconds bin_width_ps = 64;
  bool fit_slow = false;
  bool fit_offset = true;
  /// The fit starts this many jitter sigmas after the histogram peak and stops as far
  /// before the end of the range.
  double fit_start_sigmas = 3.0;
};

struct SweepSettings {
  std::vector<double> powers_w;
  double reference_power_w = 0.150;
  bool include_background = false;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::hbt_visible;
  std::string name = "hbt_visible";
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  int repeats = 1;
  /// Multiplies the collected source rate, background rate and converter noise. Normalized
  /// correlations and signal-to-noise ratios do not depend on it; statistics improve.
  double rate_scale = 1.0;
  unsigned threads = 1;
  std::size_t correlation_chunks = 1;

  EmitterConfig emitter;
  PumpConfig pump;
  ConversionSpec conversion;
  std::optional<EtalonSpec> etalon;  ///< extra filter on the visible source, off by default
  FbgSpec fbg;
  bool apply_fbg = true;
  DetectorSpec detector_a;
  DetectorSpec detector_b;
  double beamsplitter_ratio = 0.5;
  CorrelationConfig correlation;
  CrosstalkConfig crosstalk;

  HbtSettings hbt;
  CrossSettings cross;
  MichelsonSettings michelson;
  LifetimeSettings lifetime;
  SweepSettings sweep;
};

/// Defaults for a kind: excitation mode, detector pair, correlation window, sweep grid.
Scenario default_scenario(ScenarioKind kind);

/// Throws ConfigError on any invalid field.
void validate(const Scenario& scenario);

/// Parses YAML text. Missing keys keep the kind's defaults; unknown keys are errors.
Scenario parse_scenario(std::string_view text, std::string_view source_name = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Complete YAML rendering; parse_scenario(to_yaml(s)) reproduces s.
std::string to_yaml(const Scenario& scenario);

}  // namespace qfc
