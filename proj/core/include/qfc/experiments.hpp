#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfc/scenario.hpp"

namespace qfc {

struct RunReport {
  std::string scenario_name;
  ScenarioKind kind = ScenarioKind::hbt_visible;
  std::string scenario_yaml;
  std::filesystem::path output_dir;
  /// Headline metrics in emission order. Each is recomputable from the listed artifacts.
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> artifacts;  ///< file names relative to output_dir
  std::vector<std::pair<std::string, std::uint64_t>> event_counts;
  std::vector<std::string> warnings;
  double wall_clock_s = 0.0;

  bool has_metric(std::string_view name) const;
  /// Throws std::out_of_range for an unknown metric.
  double metric(std::string_view name) const;
  void set_metric(std::string name, double value);
  void add_count(std::string name, std::uint64_t value);
};

/// The scenario's emitter with rate_scale applied (emission probability and background).
EmitterConfig scaled_emitter(const Scenario& scenario);

/// The scenario's conversion stage with rate_scale applied to the converter noise.
ConversionSpec scaled_conversion(const Scenario& scenario);

/// Quantum-dot signal plus background for repeat `repeat`, through the optional etalon.
PhotonStream build_source(const Scenario& scenario, std::uint64_t repeat_seed, bool with_background = true);

/// Down-conversion followed by the FBG. The FBG's in-band loss is already part of
/// max_total_efficiency, so the grating acts with transmission fbg(lambda)/in_band.
PhotonStream convert_branch(const PhotonStream& visible, const Scenario& scenario, const PumpConfig& pump,
                            std::uint64_t repeat_seed);

/// Seed of one independent repeat.
std::uint64_t repeat_seed(const Scenario& scenario, std::uint64_t repeat);

/// Each run writes its CSV artifacts into output_dir (created if needed).
RunReport run_hbt(const Scenario& scenario, const std::filesystem::path& output_dir);
RunReport run_cross_hbt(const Scenario& scenario, const std::filesystem::path& output_dir);
RunReport run_michelson(const Scenario& scenario, const std::filesystem::path& output_dir);
RunReport run_lifetime(const Scenario& scenario, const std::filesystem::path& output_dir);
RunReport run_efficiency_sweep(const Scenario& scenario, const std::filesystem::path& output_dir);

/// Dispatches on scenario.kind and writes report.txt next to the artifacts.
RunReport run_scenario(const Scenario& scenario, const std::filesystem::path& output_dir);

/// Plain-text report: `key = value` lines followed by the scenario echo.
std::string format_report(const RunReport& report);
void write_report(const RunReport& report);

/// Output root from QFC_OUTPUT_ROOT, else ./qfc_output.
std::filesystem::path output_root();

}  // namespace qfc
