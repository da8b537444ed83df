#include "qfc/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "qfc/error.hpp"

namespace qfc {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::hbt_visible: return "hbt_visible";
    case ScenarioKind::hbt_converted: return "hbt_converted";
    case ScenarioKind::hbt_cross: return "hbt_cross";
    case ScenarioKind::michelson: return "michelson";
    case ScenarioKind::lifetime: return "lifetime";
    case ScenarioKind::efficiency_sweep: return "efficiency_sweep";
  }
  return "unknown";
}

std::string_view to_string(Branch branch) { return branch == Branch::visible ? "visible" : "converted"; }

ScenarioKind parse_scenario_kind(std::string_view text) {
  for (auto k : {ScenarioKind::hbt_visible, ScenarioKind::hbt_converted, ScenarioKind::hbt_cross,
                 ScenarioKind::michelson, ScenarioKind::lifetime, ScenarioKind::efficiency_sweep}) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown scenario kind '" + std::string(text) + "'");
}

Branch parse_branch(std::string_view text) {
  if (text == "visible") return Branch::visible;
  if (text == "converted") return Branch::converted;
  throw ConfigError("unknown branch '" + std::string(text) + "' (expected visible or converted)");
}

namespace {

void apply_branch_detectors(Scenario& s, Branch branch) {
  s.detector_a = branch == Branch::visible ? si_apd(1) : sspd(1);
  s.detector_b = branch == Branch::visible ? si_apd(2) : sspd(2);
}

}  // namespace

Scenario default_scenario(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  s.name = std::string(to_string(kind));
  switch (kind) {
    case ScenarioKind::hbt_visible:
      s.emitter.excitation = Excitation::continuous;
      apply_branch_detectors(s, Branch::visible);
      break;
    case ScenarioKind::hbt_converted:
      s.emitter.excitation = Excitation::continuous;
      apply_branch_detectors(s, Branch::converted);
      break;
    case ScenarioKind::hbt_cross:
      s.emitter.excitation = Excitation::continuous;
      s.detector_a = si_apd(1);
      s.detector_b = sspd(2);
      s.correlation.window_ps = 512 * 400;
      break;
    case ScenarioKind::michelson:
      apply_branch_detectors(s, s.michelson.branch);
      break;
    case ScenarioKind::lifetime:
      apply_branch_detectors(s, s.lifetime.branch);
      break;
    case ScenarioKind::efficiency_sweep:
      s.sweep.powers_w = {0.0,   0.020, 0.040, 0.060, 0.080, 0.100, 0.120, 0.134,
                          0.150, 0.170, 0.190, 0.210, 0.230, 0.250, 0.275, 0.300};
      break;
  }
  return s;
}

void validate(const Scenario& s) {
  if (!(s.duration_s > 0.0)) throw ConfigError("scenario: duration_s must be positive");
  if (s.repeats < 1) throw ConfigError("scenario: repeats must be at least 1");
  if (!(s.rate_scale > 0.0)) throw ConfigError("scenario: rate_scale must be positive");
  if (s.correlation_chunks < 1) throw ConfigError("scenario: correlation_chunks must be at least 1");
  if (!(s.beamsplitter_ratio >= 0.0 && s.beamsplitter_ratio <= 1.0)) {
    throw ConfigError("scenario: beamsplitter_ratio must lie in [0,1]");
  }
  validate(s.emitter);
  validate(s.pump);
  validate(s.conversion);
  if (s.etalon) validate(*s.etalon);
  validate(s.fbg);
  validate(s.detector_a);
  validate(s.detector_b);
  try {
    validate(s.correlation);
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  if (s.hbt.fine_bin_ps > 0 && s.correlation.window_ps % s.hbt.fine_bin_ps != 0) {
    throw ConfigError("hbt: fine_bin_ps must divide the correlation window");
  }
  if (s.hbt.fine_bin_ps < 0) throw ConfigError("hbt: fine_bin_ps must be >= 0");
  if (s.crosstalk.enabled && (s.crosstalk.pulses_per_burst < 1 || s.crosstalk.spacing_ps <= 0 ||
                              s.crosstalk.burst_rate_hz < 0.0 || s.crosstalk.discard_epsilon_ps < 0)) {
    throw ConfigError("crosstalk: invalid burst parameters");
  }
  switch (s.kind) {
    case ScenarioKind::hbt_cross:
      if (s.cross.arm_delay_ps < 0) throw ConfigError("cross: arm_delay_ps must be >= 0");
      if (s.cross.arm_delay_ps >= s.correlation.window_ps) {
        throw ConfigError("cross: arm_delay_ps must lie inside the correlation window");
      }
      if (static_cast<double>(s.cross.arm_delay_ps) >= s.duration_s * kPicosecondsPerSecond) {
        throw ConfigError("cross: arm_delay_ps must be shorter than the duration");
      }
      break;
    case ScenarioKind::michelson:
      if (s.michelson.delays_ps.empty()) throw ConfigError("michelson: delays_ps must not be empty");
      if (s.michelson.phase_steps < 8) throw ConfigError("michelson: phase_steps must be at least 8");
      break;
    case ScenarioKind::lifetime:
      if (s.emitter.excitation != Excitation::pulsed) {
        throw ConfigError("lifetime: start-stop measurement needs pulsed excitation");
      }
      if (s.lifetime.bin_width_ps <= 0) throw ConfigError("lifetime: bin_width_ps must be positive");
      if (s.lifetime.fit_start_sigmas < 0.0) throw ConfigError("lifetime: fit_start_sigmas must be >= 0");
      break;
    case ScenarioKind::efficiency_sweep:
      if (s.sweep.powers_w.empty()) throw ConfigError("sweep: powers_w must not be empty");
      for (double p : s.sweep.powers_w)
        if (!(p >= 0.0)) throw ConfigError("sweep: pump powers must be >= 0");
      break;
    default:
      break;
  }
}

namespace {

/// A YAML mapping whose keys must all be consumed.
class Section {
 public:
  Section(YAML::Node node, std::string path, bool present = true)
      : node_(std::move(node)), path_(std::move(path)), present_(present && node_.IsDefined() && !node_.IsNull()) {
    if (present_ && !node_.IsMap()) throw ConfigError(path_ + ": expected a mapping");
  }

  bool has(const std::string& key) const { return present_ && node_[key]; }

  template <class T>
  void get(const std::string& key, T& target) {
    if (!has(key)) return;
    used_.insert(key);
    try {
      target = node_[key].template as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(key) + ": invalid value");
    }
  }

  void get_ps(const std::string& key, Picoseconds& target) {
    double v = static_cast<double>(target);
    get(key, v);
    target = round_to_ps(v);
  }

  void get_u8(const std::string& key, std::uint8_t& target) {
    int v = target;
    get(key, v);
    if (v < 0 || v > 255) throw ConfigError(where(key) + ": channel must lie in [0,255]");
    target = static_cast<std::uint8_t>(v);
  }

  Section child(const std::string& key) {
    used_.insert(key);
    const bool present = has(key);
    return Section(present ? node_[key] : YAML::Node(), path_ + "." + key, present);
  }

  YAML::Node raw(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  void finish() const {
    if (!present_) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError(where(key) + ": unknown key");
    }
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  YAML::Node node_;
  std::string path_;
  bool present_ = false;
  std::set<std::string> used_;
};

void read_detector(Section sec, DetectorSpec& d) {
  sec.get("efficiency", d.efficiency);
  sec.get("dark_rate_hz", d.dark_rate_hz);
  sec.get("jitter_sigma_ps", d.jitter_sigma_ps);
  sec.get_ps("dead_time_ps", d.dead_time_ps);
  sec.get("label", d.label);
  sec.get_u8("channel", d.channel);
  sec.finish();
}

void read_emitter(Section sec, EmitterConfig& e, bool& explicit_prob) {
  std::string excitation = e.excitation == Excitation::pulsed ? "pulsed" : "continuous";
  sec.get("excitation", excitation);
  if (excitation == "pulsed") {
    e.excitation = Excitation::pulsed;
  } else if (excitation == "continuous") {
    e.excitation = Excitation::continuous;
  } else {
    throw ConfigError(sec.where("excitation") + ": expected pulsed or continuous");
  }
  sec.get("rep_rate_hz", e.rep_rate_hz);
  explicit_prob = sec.has("emission_prob");
  sec.get("emission_prob", e.emission_prob);
  sec.get("lifetime_fast_ps", e.lifetime_fast_ps);
  sec.get("refill_tau_ps", e.refill_tau_ps);
  sec.get("refill_weight", e.refill_weight);
  sec.get("excitation_time_ps", e.excitation_time_ps);
  sec.get("coherence_time_ps", e.coherence_time_ps);
  sec.get("background_rate_hz", e.background_rate_hz);
  sec.get("collected_rate_target_hz", e.collected_rate_target_hz);
  if (sec.has("background_band_nm")) {
    std::vector<double> band;
    sec.get("background_band_nm", band);
    if (band.size() != 2) throw ConfigError(sec.where("background_band_nm") + ": expected [low, high]");
    e.background_band = {band[0], band[1]};
  }
  if (sec.has("lines")) {
    const YAML::Node lines = sec.raw("lines");
    if (!lines.IsSequence()) throw ConfigError(sec.where("lines") + ": expected a list");
    e.lines.clear();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Section line(lines[i], sec.where("lines") + "[" + std::to_string(i) + "]");
      SpectralLine l;
      line.get("center_nm", l.center_nm);
      line.get("relative_intensity", l.relative_intensity);
      line.get("label", l.label);
      line.finish();
      e.lines.push_back(l);
    }
  }
  sec.finish();
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(source_name) + ": YAML syntax error: " + e.what());
  }
  if (!root.IsMap()) throw ConfigError(std::string(source_name) + ": expected a mapping at top level");
  Section top(root, std::string(source_name));

  std::string kind_text;
  top.get("kind", kind_text);
  if (kind_text.empty()) throw ConfigError(std::string(source_name) + ": missing 'kind'");
  Scenario s = default_scenario(parse_scenario_kind(kind_text));

  // Branch first: it selects the default detectors.
  if (s.kind == ScenarioKind::michelson || s.kind == ScenarioKind::lifetime) {
    Section sec = top.child(s.kind == ScenarioKind::michelson ? "michelson" : "lifetime");
    std::string branch(to_string(s.kind == ScenarioKind::michelson ? s.michelson.branch : s.lifetime.branch));
    sec.get("branch", branch);
    const Branch b = parse_branch(branch);
    if (s.kind == ScenarioKind::michelson) {
      s.michelson.branch = b;
      std::vector<double> delays = s.michelson.delays_ps;
      sec.get("delays_ps", delays);
      s.michelson.delays_ps = delays;
      sec.get("phase_steps", s.michelson.phase_steps);
    } else {
      s.lifetime.branch = b;
      sec.get_ps("bin_width_ps", s.lifetime.bin_width_ps);
      sec.get("fit_slow", s.lifetime.fit_slow);
      sec.get("fit_offset", s.lifetime.fit_offset);
      sec.get("fit_start_sigmas", s.lifetime.fit_start_sigmas);
    }
    sec.finish();
    s.detector_a = b == Branch::visible ? si_apd(1) : sspd(1);
    s.detector_b = b == Branch::visible ? si_apd(2) : sspd(2);
  }

  top.get("name", s.name);
  top.get("duration_s", s.duration_s);
  top.get("seed", s.seed);
  top.get("repeats", s.repeats);
  top.get("rate_scale", s.rate_scale);
  top.get("threads", s.threads);
  top.get("correlation_chunks", s.correlation_chunks);
  top.get("beamsplitter_ratio", s.beamsplitter_ratio);

  bool explicit_prob = false;
  read_emitter(top.child("emitter"), s.emitter, explicit_prob);
  if (!explicit_prob) s.emitter = calibrate_brightness(s.emitter);

  {
    Section sec = top.child("pump");
    sec.get("wavelength_nm", s.pump.wavelength_nm);
    sec.get("power_w", s.pump.power_w);
    sec.get("coherence_time_ps", s.pump.coherence_time_ps);
    sec.finish();
  }
  {
    Section sec = top.child("conversion");
    sec.get("length_cm", s.conversion.length_cm);
    sec.get("normalized_efficiency", s.conversion.normalized_efficiency);
    sec.get("max_total_efficiency", s.conversion.max_total_efficiency);
    sec.get("acceptance_fwhm_ghz", s.conversion.acceptance_fwhm_ghz);
    sec.get("input_center_nm", s.conversion.input_center_nm);
    sec.get("noise_rate_per_watt", s.conversion.noise_rate_per_watt);
    sec.finish();
  }
  if (top.has("etalon")) {
    Section sec = top.child("etalon");
    EtalonSpec e;
    sec.get("free_spectral_range_ghz", e.free_spectral_range_ghz);
    sec.get("finesse", e.finesse);
    sec.get("center_frequency_ghz", e.center_frequency_ghz);
    sec.finish();
    s.etalon = e;
  }
  {
    Section sec = top.child("fbg");
    sec.get("enabled", s.apply_fbg);
    sec.get("center_nm", s.fbg.center_nm);
    sec.get("bandwidth_nm", s.fbg.bandwidth_nm);
    sec.get("in_band_transmission", s.fbg.in_band_transmission);
    sec.get("out_of_band_suppression", s.fbg.out_of_band_suppression);
    sec.finish();
  }
  {
    Section sec = top.child("detectors");
    if (sec.has("a")) read_detector(sec.child("a"), s.detector_a);
    if (sec.has("b")) read_detector(sec.child("b"), s.detector_b);
    sec.finish();
  }
  {
    Section sec = top.child("correlation");
    sec.get_ps("bin_width_ps", s.correlation.bin_width_ps);
    sec.get_ps("window_ps", s.correlation.window_ps);
    sec.finish();
  }
  if (top.has("crosstalk")) {
    Section sec = top.child("crosstalk");
    s.crosstalk.enabled = true;
    sec.get("enabled", s.crosstalk.enabled);
    sec.get("burst_rate_hz", s.crosstalk.burst_rate_hz);
    sec.get("pulses_per_burst", s.crosstalk.pulses_per_burst);
    sec.get_ps("spacing_ps", s.crosstalk.spacing_ps);
    sec.get_ps("discard_epsilon_ps", s.crosstalk.discard_epsilon_ps);
    sec.finish();
  }
  if (top.has("hbt")) {
    Section sec = top.child("hbt");
    sec.get_ps("fine_bin_ps", s.hbt.fine_bin_ps);
    sec.get("save_tags", s.hbt.save_tags);
    sec.finish();
  }
  if (top.has("cross")) {
    Section sec = top.child("cross");
    sec.get_ps("arm_delay_ps", s.cross.arm_delay_ps);
    sec.finish();
  }
  if (top.has("sweep")) {
    Section sec = top.child("sweep");
    sec.get("powers_w", s.sweep.powers_w);
    sec.get("reference_power_w", s.sweep.reference_power_w);
    sec.get("include_background", s.sweep.include_background);
    sec.finish();
  }
  top.finish();
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.filename().string());
}

namespace {

void emit_detector(YAML::Emitter& out, const char* key, const DetectorSpec& d) {
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "efficiency" << YAML::Value << d.efficiency;
  out << YAML::Key << "dark_rate_hz" << YAML::Value << d.dark_rate_hz;
  out << YAML::Key << "jitter_sigma_ps" << YAML::Value << d.jitter_sigma_ps;
  out << YAML::Key << "dead_time_ps" << YAML::Value << d.dead_time_ps;
  out << YAML::Key << "label" << YAML::Value << d.label;
  out << YAML::Key << "channel" << YAML::Value << static_cast<int>(d.channel);
  out << YAML::EndMap;
}

}  // namespace

std::string to_yaml(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(s.kind));
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "duration_s" << YAML::Value << s.duration_s;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "repeats" << YAML::Value << s.repeats;
  out << YAML::Key << "rate_scale" << YAML::Value << s.rate_scale;
  out << YAML::Key << "threads" << YAML::Value << s.threads;
  out << YAML::Key << "correlation_chunks" << YAML::Value << s.correlation_chunks;
  out << YAML::Key << "beamsplitter_ratio" << YAML::Value << s.beamsplitter_ratio;

  const auto& e = s.emitter;
  out << YAML::Key << "emitter" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "excitation" << YAML::Value << (e.excitation == Excitation::pulsed ? "pulsed" : "continuous");
  out << YAML::Key << "rep_rate_hz" << YAML::Value << e.rep_rate_hz;
  out << YAML::Key << "emission_prob" << YAML::Value << e.emission_prob;
  out << YAML::Key << "lifetime_fast_ps" << YAML::Value << e.lifetime_fast_ps;
  out << YAML::Key << "refill_tau_ps" << YAML::Value << e.refill_tau_ps;
  out << YAML::Key << "refill_weight" << YAML::Value << e.refill_weight;
  out << YAML::Key << "excitation_time_ps" << YAML::Value << e.excitation_time_ps;
  out << YAML::Key << "coherence_time_ps" << YAML::Value << e.coherence_time_ps;
  out << YAML::Key << "background_rate_hz" << YAML::Value << e.background_rate_hz;
  out << YAML::Key << "background_band_nm" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << e.background_band.low_nm << e.background_band.high_nm << YAML::EndSeq;
  out << YAML::Key << "collected_rate_target_hz" << YAML::Value << e.collected_rate_target_hz;
  out << YAML::Key << "lines" << YAML::Value << YAML::BeginSeq;
  for (const auto& l : e.lines) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "center_nm" << YAML::Value << l.center_nm << YAML::Key
        << "relative_intensity" << YAML::Value << l.relative_intensity << YAML::Key << "label" << YAML::Value
        << l.label << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "pump" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "wavelength_nm" << YAML::Value << s.pump.wavelength_nm;
  out << YAML::Key << "power_w" << YAML::Value << s.pump.power_w;
  out << YAML::Key << "coherence_time_ps" << YAML::Value << s.pump.coherence_time_ps;
  out << YAML::EndMap;

  const auto& c = s.conversion;
  out << YAML::Key << "conversion" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "length_cm" << YAML::Value << c.length_cm;
  out << YAML::Key << "normalized_efficiency" << YAML::Value << c.normalized_efficiency;
  out << YAML::Key << "max_total_efficiency" << YAML::Value << c.max_total_efficiency;
  out << YAML::Key << "acceptance_fwhm_ghz" << YAML::Value << c.acceptance_fwhm_ghz;
  out << YAML::Key << "input_center_nm" << YAML::Value << c.input_center_nm;
  out << YAML::Key << "noise_rate_per_watt" << YAML::Value << c.noise_rate_per_watt;
  out << YAML::EndMap;

  if (s.etalon) {
    out << YAML::Key << "etalon" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "free_spectral_range_ghz" << YAML::Value << s.etalon->free_spectral_range_ghz;
    out << YAML::Key << "finesse" << YAML::Value << s.etalon->finesse;
    out << YAML::Key << "center_frequency_ghz" << YAML::Value << s.etalon->center_frequency_ghz;
    out << YAML::EndMap;
  }

  out << YAML::Key << "fbg" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << s.apply_fbg;
  out << YAML::Key << "center_nm" << YAML::Value << s.fbg.center_nm;
  out << YAML::Key << "bandwidth_nm" << YAML::Value << s.fbg.bandwidth_nm;
  out << YAML::Key << "in_band_transmission" << YAML::Value << s.fbg.in_band_transmission;
  out << YAML::Key << "out_of_band_suppression" << YAML::Value << s.fbg.out_of_band_suppression;
  out << YAML::EndMap;

  out << YAML::Key << "detectors" << YAML::Value << YAML::BeginMap;
  emit_detector(out, "a", s.detector_a);
  emit_detector(out, "b", s.detector_b);
  out << YAML::EndMap;

  out << YAML::Key << "correlation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bin_width_ps" << YAML::Value << s.correlation.bin_width_ps;
  out << YAML::Key << "window_ps" << YAML::Value << s.correlation.window_ps;
  out << YAML::EndMap;

  out << YAML::Key << "crosstalk" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << s.crosstalk.enabled;
  out << YAML::Key << "burst_rate_hz" << YAML::Value << s.crosstalk.burst_rate_hz;
  out << YAML::Key << "pulses_per_burst" << YAML::Value << s.crosstalk.pulses_per_burst;
  out << YAML::Key << "spacing_ps" << YAML::Value << s.crosstalk.spacing_ps;
  out << YAML::Key << "discard_epsilon_ps" << YAML::Value << s.crosstalk.discard_epsilon_ps;
  out << YAML::EndMap;

  out << YAML::Key << "hbt" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fine_bin_ps" << YAML::Value << s.hbt.fine_bin_ps;
  out << YAML::Key << "save_tags" << YAML::Value << s.hbt.save_tags;
  out << YAML::EndMap;

  out << YAML::Key << "cross" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "arm_delay_ps" << YAML::Value << s.cross.arm_delay_ps;
  out << YAML::EndMap;

  if (s.kind == ScenarioKind::michelson) {
    out << YAML::Key << "michelson" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "branch" << YAML::Value << std::string(to_string(s.michelson.branch));
    out << YAML::Key << "delays_ps" << YAML::Value << YAML::Flow << s.michelson.delays_ps;
    out << YAML::Key << "phase_steps" << YAML::Value << s.michelson.phase_steps;
    out << YAML::EndMap;
  }
  if (s.kind == ScenarioKind::lifetime) {
    out << YAML::Key << "lifetime" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "branch" << YAML::Value << std::string(to_string(s.lifetime.branch));
    out << YAML::Key << "bin_width_ps" << YAML::Value << s.lifetime.bin_width_ps;
    out << YAML::Key << "fit_slow" << YAML::Value << s.lifetime.fit_slow;
    out << YAML::Key << "fit_offset" << YAML::Value << s.lifetime.fit_offset;
    out << YAML::Key << "fit_start_sigmas" << YAML::Value << s.lifetime.fit_start_sigmas;
    out << YAML::EndMap;
  }

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "powers_w" << YAML::Value << YAML::Flow << s.sweep.powers_w;
  out << YAML::Key << "reference_power_w" << YAML::Value << s.sweep.reference_power_w;
  out << YAML::Key << "include_background" << YAML::Value << s.sweep.include_background;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace qfc
