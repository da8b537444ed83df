#include "qfc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qfc/error.hpp"
#include "qfc/fitting.hpp"
#include "qfc/tag_io.hpp"

namespace qfc {

bool RunReport::has_metric(std::string_view name) const {
  return std::any_of(metrics.begin(), metrics.end(), [&](const auto& m) { return m.first == name; });
}

double RunReport::metric(std::string_view name) const {
  for (const auto& m : metrics)
    if (m.first == name) return m.second;
  throw std::out_of_range("RunReport: no metric named " + std::string(name));
}

void RunReport::set_metric(std::string name, double value) {
  for (auto& m : metrics) {
    if (m.first == name) {
      m.second = value;
      return;
    }
  }
  metrics.emplace_back(std::move(name), value);
}

void RunReport::add_count(std::string name, std::uint64_t value) {
  for (auto& c : event_counts) {
    if (c.first == name) {
      c.second += value;
      return;
    }
  }
  event_counts.emplace_back(std::move(name), value);
}

namespace {

using Clock = std::chrono::steady_clock;

Picoseconds duration_ps(const Scenario& s) { return round_to_ps(seconds_to_ps(s.duration_s)); }

struct Summary {
  double mean = 0.0;
  double std = 0.0;
  double sem = 0.0;
};

Summary summarize(const std::vector<double>& v) {
  Summary out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    out.sem = out.std / std::sqrt(static_cast<double>(v.size()));
  }
  return out;
}

double ratio_or_inf(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

std::uint64_t noise_count(const OriginCounts& c) {
  return c[static_cast<std::size_t>(Origin::background)] + c[static_cast<std::size_t>(Origin::converter_noise)] +
         c[static_cast<std::size_t>(Origin::dark)];
}

std::uint64_t signal_count(const OriginCounts& c) { return c[static_cast<std::size_t>(Origin::signal)]; }

RunReport start_report(const Scenario& s, const std::filesystem::path& dir) {
  validate(s);
  std::filesystem::create_directories(dir);
  RunReport rep;
  rep.scenario_name = s.name;
  rep.kind = s.kind;
  rep.scenario_yaml = to_yaml(s);
  rep.output_dir = dir;
  return rep;
}

void require_kind(const Scenario& s, std::initializer_list<ScenarioKind> kinds, const char* what) {
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end()) {
    throw ContractError(std::string(what) + ": scenario kind " + std::string(to_string(s.kind)) + " not accepted");
  }
}

void add_artifact(RunReport& rep, const std::string& name) {
  if (std::find(rep.artifacts.begin(), rep.artifacts.end(), name) == rep.artifacts.end()) rep.artifacts.push_back(name);
}

double elapsed_s(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

TagList detected(const PhotonStream& stream, const DetectorSpec& spec, const Scenario& s, std::uint64_t seed) {
  return detect(stream, spec, s.duration_s, seed);
}

}  // namespace

EmitterConfig scaled_emitter(const Scenario& s) {
  EmitterConfig e = s.emitter;
  e.emission_prob *= s.rate_scale;
  e.collected_rate_target_hz *= s.rate_scale;
  e.background_rate_hz *= s.rate_scale;
  if (e.emission_prob > 1.0) {
    throw ConfigError("rate_scale " + format_number(s.rate_scale) + " pushes the emission probability above 1");
  }
  return e;
}

ConversionSpec scaled_conversion(const Scenario& s) {
  ConversionSpec c = s.conversion;
  c.noise_rate_per_watt *= s.rate_scale;
  return c;
}

std::uint64_t repeat_seed(const Scenario& s, std::uint64_t repeat) { return derive_seed(s.seed, "repeat", repeat); }

PhotonStream build_source(const Scenario& s, std::uint64_t rs, bool with_background) {
  const EmitterConfig e = scaled_emitter(s);
  PhotonStream stream = generate_signal_stream(e, s.duration_s, derive_seed(rs, "signal"));
  if (with_background && e.background_rate_hz > 0.0) {
    const auto bg = generate_background_stream(e.background_rate_hz, e.background_band, s.duration_s,
                                               derive_seed(rs, "background"));
    stream = merge_streams(stream, bg);
  }
  if (s.etalon) {
    const EtalonSpec etalon = *s.etalon;
    stream = apply_filter(
        stream,
        [&](const PhotonEvent& ev) {
          return etalon_transmission(wavelength_to_ghz(ev.wavelength_nm) - etalon.center_frequency_ghz, etalon);
        },
        derive_seed(rs, "etalon"));
  }
  return stream;
}

PhotonStream convert_branch(const PhotonStream& visible, const Scenario& s, const PumpConfig& pump,
                            std::uint64_t rs) {
  PhotonStream out = convert_stream(visible, pump, scaled_conversion(s), s.duration_s, derive_seed(rs, "convert"));
  if (!s.apply_fbg) return out;
  const FbgSpec fbg = s.fbg;
  return apply_filter(
      out,
      [&](const PhotonEvent& ev) {
        if (fbg.in_band_transmission <= 0.0) return 0.0;
        return std::min(1.0, fbg_band_transmission(ev.wavelength_nm, fbg) / fbg.in_band_transmission);
      },
      derive_seed(rs, "fbg"));
}

RunReport run_hbt(const Scenario& s, const std::filesystem::path& dir) {
  require_kind(s, {ScenarioKind::hbt_visible, ScenarioKind::hbt_converted}, "run_hbt");
  const auto t0 = Clock::now();
  RunReport rep = start_report(s, dir);
  const bool converted = s.kind == ScenarioKind::hbt_converted;
  const AcquisitionSpan span{0, duration_ps(s)};
  CorrelationConfig fine = s.correlation;
  if (s.hbt.fine_bin_ps > 0) {
    fine.bin_width_ps = s.hbt.fine_bin_ps;
    fine.window_ps = (s.correlation.window_ps / fine.bin_width_ps) * fine.bin_width_ps;
  }

  std::vector<CorrelationHistogram> hists;
  std::vector<CorrelationHistogram> fine_hists;
  std::vector<std::vector<double>> rows;
  std::vector<double> g0s;
  std::vector<double> g0s_fine;
  double src_signal = 0, src_noise = 0, out_signal = 0, out_noise = 0;

  for (int r = 0; r < s.repeats; ++r) {
    const std::uint64_t rs = repeat_seed(s, static_cast<std::uint64_t>(r));
    PhotonStream stream = build_source(s, rs);
    const OriginCounts sc = count_origins(stream);
    src_signal += static_cast<double>(signal_count(sc));
    src_noise += static_cast<double>(noise_count(sc));
    rep.add_count("source_events", stream.size());
    double row_out_signal = 0, row_out_noise = 0;
    if (converted) {
      stream = convert_branch(stream, s, s.pump, rs);
      const OriginCounts oc = count_origins(stream);
      row_out_signal = static_cast<double>(signal_count(oc));
      row_out_noise = static_cast<double>(noise_count(oc));
      out_signal += row_out_signal;
      out_noise += row_out_noise;
      rep.add_count("converted_events", stream.size());
    }
    auto [arm_a, arm_b] = beamsplitter(stream, s.beamsplitter_ratio, derive_seed(rs, "split"));
    PhotonStream().swap(stream);
    TagList ta = detected(arm_a, s.detector_a, s, derive_seed(rs, "detect.a"));
    TagList tb = detected(arm_b, s.detector_b, s, derive_seed(rs, "detect.b"));
    PhotonStream().swap(arm_a);
    PhotonStream().swap(arm_b);
    if (s.crosstalk.enabled) {
      std::tie(ta, tb) = add_crosstalk_bursts(ta, tb, s.crosstalk.burst_rate_hz, s.crosstalk.pulses_per_burst,
                                              s.crosstalk.spacing_ps, s.duration_s, derive_seed(rs, "crosstalk"));
      const std::size_t before = ta.size() + tb.size();
      std::tie(ta, tb) = discard_crosstalk_bursts(ta, tb, s.crosstalk.discard_epsilon_ps);
      rep.add_count("crosstalk_removed_tags", before - ta.size() - tb.size());
    }
    rep.add_count("tags_a", ta.size());
    rep.add_count("tags_b", tb.size());
    if (s.hbt.save_tags && r == 0) {
      write_qtag(dir / "tags_a.qtag", ta);
      write_qtag(dir / "tags_b.qtag", tb);
      add_artifact(rep, "tags_a.qtag");
      add_artifact(rep, "tags_b.qtag");
    }

    auto hist = cross_correlate_chunked(ta, tb, s.correlation, span, span, s.correlation_chunks, s.threads);
    const auto curve = normalize_g2(hist);
    const double g0 = g2_zero(curve, s.correlation.bin_width_ps);
    g0s.push_back(g0);
    std::vector<double> row{static_cast<double>(r),
                            g0,
                            static_cast<double>(hist.counts[hist.center_index()]),
                            poisson_expectation_per_bin(hist),
                            hist.rate_a_hz,
                            hist.rate_b_hz,
                            static_cast<double>(signal_count(sc)),
                            static_cast<double>(noise_count(sc)),
                            row_out_signal,
                            row_out_noise};
    if (s.hbt.fine_bin_ps > 0) {
      auto fh = cross_correlate_chunked(ta, tb, fine, span, span, s.correlation_chunks, s.threads);
      const double gf = g2_zero(normalize_g2(fh), fine.bin_width_ps);
      g0s_fine.push_back(gf);
      row.push_back(gf);
      row.push_back(static_cast<double>(fh.counts[fh.center_index()]));
      row.push_back(poisson_expectation_per_bin(fh));
      fine_hists.push_back(std::move(fh));
    }
    rows.push_back(std::move(row));
    hists.push_back(std::move(hist));
  }

  std::vector<std::string> columns{"repeat",     "g2_zero",       "zero_bin_counts", "zero_bin_expectation",
                                   "rate_a_hz",  "rate_b_hz",     "source_signal",   "source_noise",
                                   "out_signal", "out_noise"};
  if (s.hbt.fine_bin_ps > 0) {
    columns.insert(columns.end(), {"g2_zero_fine", "fine_zero_bin_counts", "fine_zero_bin_expectation"});
  }
  write_table_csv(dir / "per_seed.csv", columns, rows);
  add_artifact(rep, "per_seed.csv");
  const auto pooled = normalize_pooled(hists);
  write_g2_csv(dir / "g2.csv", pooled);
  add_artifact(rep, "g2.csv");

  const Summary g = summarize(g0s);
  rep.set_metric("g2_zero", g.mean);
  rep.set_metric("g2_zero_std", g.std);
  rep.set_metric("g2_zero_sem", g.sem);
  rep.set_metric("g2_zero_pooled", g2_zero(pooled, s.correlation.bin_width_ps));
  if (s.hbt.fine_bin_ps > 0) {
    const auto pooled_fine = normalize_pooled(fine_hists);
    write_g2_csv(dir / "g2_fine.csv", pooled_fine);
    add_artifact(rep, "g2_fine.csv");
    const Summary f = summarize(g0s_fine);
    rep.set_metric("g2_zero_fine", f.mean);
    rep.set_metric("g2_zero_fine_sem", f.sem);
    rep.set_metric("fine_bin_ps", static_cast<double>(fine.bin_width_ps));
  }
  rep.set_metric("source_snr", ratio_or_inf(src_signal, src_noise));
  if (converted) rep.set_metric("converted_snr", ratio_or_inf(out_signal, out_noise));
  double ra = 0, rb = 0;
  for (const auto& h : hists) {
    ra += h.rate_a_hz;
    rb += h.rate_b_hz;
  }
  rep.set_metric("rate_a_hz", ra / static_cast<double>(hists.size()));
  rep.set_metric("rate_b_hz", rb / static_cast<double>(hists.size()));
  rep.set_metric("repeats", s.repeats);
  rep.wall_clock_s = elapsed_s(t0);
  return rep;
}

RunReport run_cross_hbt(const Scenario& s, const std::filesystem::path& dir) {
  require_kind(s, {ScenarioKind::hbt_cross}, "run_cross_hbt");
  const auto t0 = Clock::now();
  RunReport rep = start_report(s, dir);
  const Picoseconds delay = s.cross.arm_delay_ps;
  const AcquisitionSpan span_a{0, duration_ps(s)};
  const AcquisitionSpan span_b{delay, duration_ps(s) + delay};

  std::vector<CorrelationHistogram> hists;
  double tags_b = 0.0;
  double t_int = 0.0;
  for (int r = 0; r < s.repeats; ++r) {
    const std::uint64_t rs = repeat_seed(s, static_cast<std::uint64_t>(r));
    PhotonStream source = build_source(s, rs);
    rep.add_count("source_events", source.size());
    auto [visible, to_convert] = beamsplitter(source, s.beamsplitter_ratio, derive_seed(rs, "split"));
    PhotonStream().swap(source);
    const TagList ta = detected(visible, s.detector_a, s, derive_seed(rs, "detect.a"));
    PhotonStream().swap(visible);
    const PhotonStream converted = convert_branch(to_convert, s, s.pump, rs);
    PhotonStream().swap(to_convert);
    rep.add_count("converted_events", converted.size());
    const TagList tb = delay_tags(detected(converted, s.detector_b, s, derive_seed(rs, "detect.b")), delay);
    rep.add_count("tags_a", ta.size());
    rep.add_count("tags_b", tb.size());
    auto hist = cross_correlate_chunked(ta, tb, s.correlation, span_a, span_b, s.correlation_chunks, s.threads);
    tags_b += static_cast<double>(hist.tags_b);
    t_int += hist.t_int_s;
    hists.push_back(std::move(hist));
  }

  // Arm B must rise clearly above its own dark counts for the dip to mean anything.
  const double dark = s.detector_b.dark_rate_hz * t_int;
  const bool significant = tags_b > dark + 5.0 * std::sqrt(std::max(dark, 1.0));
  if (!significant) rep.warnings.push_back("arm B count rate is at the dark-count floor; no correlation signal");
  rep.set_metric("dip_significant", significant ? 1.0 : 0.0);
  rep.set_metric("arm_delay_ps", static_cast<double>(delay));
  rep.set_metric("repeats", s.repeats);
  if (tags_b == 0.0) {
    rep.warnings.push_back("arm B recorded no tags; the cross-correlation is undefined");
    rep.wall_clock_s = elapsed_s(t0);
    return rep;
  }

  const auto pooled = normalize_pooled(hists);
  write_g2_csv(dir / "g2.csv", pooled);
  add_artifact(rep, "g2.csv");
  const DipEstimate dip = find_dip(pooled, 3);

  std::vector<std::vector<double>> rows;
  std::vector<double> at_dip;
  for (std::size_t r = 0; r < hists.size(); ++r) {
    const auto& h = hists[r];
    const double expectation = poisson_expectation_per_bin(h);
    const double g = expectation > 0.0 ? static_cast<double>(h.counts[dip.index]) / expectation : 0.0;
    at_dip.push_back(g);
    rows.push_back({static_cast<double>(r), g, static_cast<double>(h.counts[dip.index]), expectation, h.rate_a_hz,
                    h.rate_b_hz});
  }
  write_table_csv(dir / "per_seed.csv",
                  {"repeat", "g2_at_dip", "dip_bin_counts", "dip_bin_expectation", "rate_a_hz", "rate_b_hz"}, rows);
  add_artifact(rep, "per_seed.csv");

  const Summary g = summarize(at_dip);
  rep.set_metric("dip_g2", dip.g2);
  rep.set_metric("dip_g2_smoothed", dip.smoothed);
  rep.set_metric("dip_tau_ps", static_cast<double>(dip.tau_ps));
  rep.set_metric("dip_g2_seed_mean", g.mean);
  rep.set_metric("dip_g2_seed_sem", g.sem);
  rep.wall_clock_s = elapsed_s(t0);
  return rep;
}

RunReport run_michelson(const Scenario& s, const std::filesystem::path& dir) {
  require_kind(s, {ScenarioKind::michelson}, "run_michelson");
  const auto t0 = Clock::now();
  RunReport rep = start_report(s, dir);
  const bool converted = s.michelson.branch == Branch::converted;
  const double t2_in = s.emitter.coherence_time_ps;
  const double t2_eff = converted ? converted_coherence_time(t2_in, s.pump.coherence_time_ps) : t2_in;
  const int steps = s.michelson.phase_steps;
  const double seg_ps = seconds_to_ps(s.duration_s) / steps;

  std::vector<std::vector<double>> fringe_rows;
  std::vector<std::vector<double>> vis_rows;
  std::vector<CurvePoint> points;
  for (std::size_t d = 0; d < s.michelson.delays_ps.size(); ++d) {
    const double tau = s.michelson.delays_ps[d];
    const double v_signal = std::exp(-std::abs(tau) / t2_eff);
    std::vector<double> counts(static_cast<std::size_t>(steps), 0.0);
    for (int r = 0; r < s.repeats; ++r) {
      const std::uint64_t rs = derive_seed(repeat_seed(s, static_cast<std::uint64_t>(r)), "delay", d);
      PhotonStream stream = build_source(s, rs);
      if (converted) stream = convert_branch(stream, s, s.pump, rs);
      rep.add_count("input_events", stream.size());
      auto segment = [&](Picoseconds t) {
        const auto k = static_cast<long long>(std::floor(static_cast<double>(t) / seg_ps));
        return static_cast<std::size_t>(std::clamp<long long>(k, 0, steps - 1));
      };
      // Phase step k occupies the k-th time segment; the output port transmits
      // (1 + V cos phi)/2, with V = 0 for light that is not from the emitter.
      const PhotonStream port = apply_filter(
          stream,
          [&](const PhotonEvent& ev) {
            const double phi = 2.0 * kPi * static_cast<double>(segment(ev.timestamp)) / steps;
            const double v = ev.origin == Origin::signal ? v_signal : 0.0;
            return 0.5 * (1.0 + v * std::cos(phi));
          },
          derive_seed(rs, "michelson"));
      const TagList tags = detected(port, s.detector_a, s, derive_seed(rs, "detect.a"));
      rep.add_count("tags", tags.size());
      for (const auto& t : tags) counts[segment(t.timestamp)] += 1.0;
    }
    std::vector<double> rates(counts.size());
    const double seg_s = ps_to_seconds(seg_ps) * s.repeats;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      rates[k] = counts[k] / seg_s;
      fringe_rows.push_back({tau, static_cast<double>(k), 2.0 * kPi * static_cast<double>(k) / steps, counts[k],
                             rates[k]});
    }
    const FringeResult f = fringe_scan(rates);
    if (f.clamped) rep.warnings.push_back("visibility clamped to 1 at delay " + format_number(tau) + " ps");
    vis_rows.push_back({tau, f.visibility, f.i_max, f.i_min, f.clamped ? 1.0 : 0.0});
    points.push_back({tau, f.visibility});
  }
  write_table_csv(dir / "fringes.csv", {"delay_ps", "phase_index", "phase_rad", "counts", "rate_hz"}, fringe_rows);
  write_table_csv(dir / "visibility.csv", {"delay_ps", "visibility", "i_max", "i_min", "clamped"}, vis_rows);
  add_artifact(rep, "fringes.csv");
  add_artifact(rep, "visibility.csv");

  for (std::size_t d = 0; d < points.size(); ++d) {
    if (points[d].x == 0.0) rep.set_metric("visibility_zero_delay", points[d].y);
  }
  if (points.size() >= 4) {
    const FitResult fit = fit_visibility_decay(points);
    std::ofstream(dir / "fit.txt") << format_fit_report(fit);
    add_artifact(rep, "fit.txt");
    rep.set_metric("t2_ps", fit.value("t2"));
    rep.set_metric("t2_error_ps", fit.error("t2"));
    rep.set_metric("v0", fit.value("v0"));
    rep.set_metric("v0_error", fit.error("v0"));
    rep.set_metric("fit_reduced_chi2", fit.reduced_chi2);
    for (const auto& w : fit.warnings) rep.warnings.push_back("visibility fit: " + w);
  } else {
    rep.warnings.push_back("fewer than 4 delays; no coherence-time fit");
  }
  rep.set_metric("t2_input_ps", t2_in);
  rep.set_metric("t2_effective_ps", t2_eff);
  rep.set_metric("coherence_shift", std::abs(t2_eff - t2_in) / t2_in);
  rep.wall_clock_s = elapsed_s(t0);
  return rep;
}

RunReport run_lifetime(const Scenario& s, const std::filesystem::path& dir) {
  require_kind(s, {ScenarioKind::lifetime}, "run_lifetime");
  const auto t0 = Clock::now();
  RunReport rep = start_report(s, dir);
  const bool converted = s.lifetime.branch == Branch::converted;
  const double period_ps = kPicosecondsPerSecond / s.emitter.rep_rate_hz;
  StartStopConfig cfg;
  cfg.bin_width_ps = s.lifetime.bin_width_ps;
  cfg.range_ps = static_cast<Picoseconds>(std::floor(period_ps / static_cast<double>(cfg.bin_width_ps))) *
                 cfg.bin_width_ps;
  if (cfg.range_ps <= 0) throw ConfigError("lifetime: bin width exceeds the pulse period");

  DelayHistogram total;
  total.config = cfg;
  total.counts.assign(static_cast<std::size_t>(cfg.range_ps / cfg.bin_width_ps), 0);
  const auto pulses = static_cast<std::size_t>(std::floor(s.duration_s * s.emitter.rep_rate_hz));
  TagList sync(pulses);
  for (std::size_t k = 0; k < pulses; ++k) sync[k] = TimeTag{round_to_ps(static_cast<double>(k) * period_ps), 0};

  for (int r = 0; r < s.repeats; ++r) {
    const std::uint64_t rs = repeat_seed(s, static_cast<std::uint64_t>(r));
    PhotonStream stream = build_source(s, rs);
    if (converted) stream = convert_branch(stream, s, s.pump, rs);
    rep.add_count("input_events", stream.size());
    const TagList tags = detected(stream, s.detector_a, s, derive_seed(rs, "detect.a"));
    rep.add_count("tags", tags.size());
    const DelayHistogram h = start_stop_histogram(sync, tags, cfg);
    for (std::size_t j = 0; j < h.counts.size(); ++j) total.counts[j] += h.counts[j];
    total.starts += h.starts;
  }
  rep.add_count("sync_tags", total.starts);

  std::vector<CurvePoint> decay;
  for (std::size_t j = 0; j < total.counts.size(); ++j) {
    decay.push_back({total.bin_center_ps(j), static_cast<double>(total.counts[j])});
  }
  write_curve_csv(dir / "decay.csv", decay, "delay_ps,counts");
  add_artifact(rep, "decay.csv");

  const auto peak = static_cast<std::size_t>(
      std::max_element(total.counts.begin(), total.counts.end()) - total.counts.begin());
  const auto skip = static_cast<std::size_t>(
      std::ceil(s.lifetime.fit_start_sigmas * s.detector_a.jitter_sigma_ps / static_cast<double>(cfg.bin_width_ps)));
  // Photons jittered to before their own sync wrap around to the end of the range, so the
  // same margin is kept clear at the far end.
  const std::size_t first = std::min(peak + skip, decay.size());
  const std::size_t last = decay.size() > skip ? decay.size() - skip : 0;
  if (last <= first) throw ConfigError("lifetime: fit window is empty; reduce fit_start_sigmas or the bin width");
  const std::vector<CurvePoint> window(decay.begin() + static_cast<std::ptrdiff_t>(first),
                                       decay.begin() + static_cast<std::ptrdiff_t>(last));
  rep.set_metric("fit_start_ps", decay[first].x);
  rep.set_metric("fit_stop_ps", decay[last - 1].x);

  BiexponentialOptions opt;
  opt.fix_weight_zero = !s.lifetime.fit_slow;
  opt.fit_offset = s.lifetime.fit_offset;
  const FitResult fit = fit_biexponential(window, opt);
  std::ofstream(dir / "fit.txt") << format_fit_report(fit);
  add_artifact(rep, "fit.txt");

  std::vector<double> residuals;
  const double a = fit.value("amplitude"), tf = fit.value("tau_fast"), ts = fit.value("tau_slow"),
               w = fit.value("weight"), off = fit.value("offset");
  for (const auto& p : window) {
    residuals.push_back(p.y - (a * ((1.0 - w) * std::exp(-p.x / tf) + w * std::exp(-p.x / ts)) + off));
  }
  rep.set_metric("tau_fast_ps", tf);
  rep.set_metric("tau_fast_error_ps", fit.error("tau_fast"));
  if (s.lifetime.fit_slow) {
    rep.set_metric("tau_slow_ps", ts);
    rep.set_metric("tau_slow_error_ps", fit.error("tau_slow"));
    rep.set_metric("slow_weight", w);
    // Fraction of decays in the slow branch (areas, not amplitudes).
    rep.set_metric("slow_photon_fraction", w * ts / (w * ts + (1.0 - w) * tf));
  }
  if (s.lifetime.fit_offset) rep.set_metric("offset", off);
  rep.set_metric("fit_reduced_chi2", fit.reduced_chi2);
  rep.set_metric("fit_converged", fit.converged ? 1.0 : 0.0);
  rep.set_metric("runs_test_p", runs_test_p_value(residuals));
  for (const auto& wmsg : fit.warnings) rep.warnings.push_back("lifetime fit: " + wmsg);
  rep.wall_clock_s = elapsed_s(t0);
  return rep;
}

RunReport run_efficiency_sweep(const Scenario& s, const std::filesystem::path& dir) {
  require_kind(s, {ScenarioKind::efficiency_sweep}, "run_efficiency_sweep");
  const auto t0 = Clock::now();
  RunReport rep = start_report(s, dir);

  std::vector<std::vector<double>> rows;
  std::vector<CurvePoint> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < s.sweep.powers_w.size(); ++i) {
    PumpConfig pump = s.pump;
    pump.power_w = s.sweep.powers_w[i];
    double n_in = 0, n_out = 0, n_noise = 0;
    for (int r = 0; r < s.repeats; ++r) {
      const std::uint64_t rs = derive_seed(repeat_seed(s, static_cast<std::uint64_t>(r)), "power", i);
      const PhotonStream input = build_source(s, rs, s.sweep.include_background);
      const PhotonStream output = convert_branch(input, s, pump, rs);
      const OriginCounts ci = count_origins(input);
      const OriginCounts co = count_origins(output);
      n_in += static_cast<double>(signal_count(ci));
      n_out += static_cast<double>(signal_count(co));
      n_noise += static_cast<double>(noise_count(co));
      rep.add_count("input_events", input.size());
      rep.add_count("output_events", output.size());
    }
    const double eta = n_in > 0.0 ? n_out / n_in : 0.0;
    const double snr = ratio_or_inf(n_out, n_noise);
    rows.push_back({pump.power_w, n_in, n_out, n_noise, eta, snr});
    points.push_back({pump.power_w, eta});
    // Binomial variance of eta, floored at one count.
    weights.push_back(n_in / std::max(eta * (1.0 - eta), 1.0 / std::max(n_in, 1.0)));
  }
  write_table_csv(dir / "sweep.csv", {"power_w", "n_in", "n_out", "n_noise", "efficiency", "snr"}, rows);
  add_artifact(rep, "sweep.csv");

  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].y > points[best].y) best = i;
  rep.set_metric("efficiency_max", points[best].y);
  rep.set_metric("power_at_max_w", points[best].x);
  rep.set_metric("snr_at_max", rows[best][5]);
  bool found_reference = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::abs(points[i].x - s.sweep.reference_power_w) < 1e-12) {
      rep.set_metric("reference_power_w", points[i].x);
      rep.set_metric("efficiency_at_reference", points[i].y);
      rep.set_metric("snr_at_reference", rows[i][5]);
      found_reference = true;
    }
  }
  if (!found_reference) rep.warnings.push_back("reference pump power is not on the sweep grid");

  if (std::count_if(points.begin(), points.end(), [](const CurvePoint& p) { return p.y > 0.0; }) >= 3) {
    const FitResult fit = fit_conversion_curve(points, s.conversion.length_cm, weights);
    std::ofstream(dir / "fit.txt") << format_fit_report(fit);
    add_artifact(rep, "fit.txt");
    const double eta_n = fit.value("normalized_efficiency");
    rep.set_metric("fitted_normalized_efficiency", eta_n);
    rep.set_metric("fitted_normalized_efficiency_error", fit.error("normalized_efficiency"));
    rep.set_metric("fitted_amplitude", fit.value("amplitude"));
    rep.set_metric("fitted_optimal_power_w", (kPi / 2.0) * (kPi / 2.0) / (eta_n * s.conversion.length_cm *
                                                                           s.conversion.length_cm));
    rep.set_metric("fit_reduced_chi2", fit.reduced_chi2);
    for (const auto& w : fit.warnings) rep.warnings.push_back("conversion fit: " + w);
  } else {
    rep.warnings.push_back("fewer than 3 powers with conversion; no sin^2 fit");
  }
  rep.wall_clock_s = elapsed_s(t0);
  return rep;
}

RunReport run_scenario(const Scenario& s, const std::filesystem::path& dir) {
  RunReport rep;
  switch (s.kind) {
    case ScenarioKind::hbt_visible:
    case ScenarioKind::hbt_converted: rep = run_hbt(s, dir); break;
    case ScenarioKind::hbt_cross: rep = run_cross_hbt(s, dir); break;
    case ScenarioKind::michelson: rep = run_michelson(s, dir); break;
    case ScenarioKind::lifetime: rep = run_lifetime(s, dir); break;
    case ScenarioKind::efficiency_sweep: rep = run_efficiency_sweep(s, dir); break;
  }
  write_report(rep);
  return rep;
}

std::string format_report(const RunReport& rep) {
  std::ostringstream out;
  out << "scenario = " << rep.scenario_name << '\n';
  out << "kind = " << to_string(rep.kind) << '\n';
  for (const auto& [name, value] : rep.metrics) out << name << " = " << format_number(value) << '\n';
  for (const auto& [name, value] : rep.event_counts) out << "count." << name << " = " << value << '\n';
  for (const auto& a : rep.artifacts) out << "artifact = " << a << '\n';
  for (const auto& w : rep.warnings) out << "warning = " << w << '\n';
  out << "wall_clock_s = " << format_number(rep.wall_clock_s) << '\n';
  out << "\n# scenario\n" << rep.scenario_yaml;
  return out.str();
}

void write_report(const RunReport& rep) {
  std::filesystem::create_directories(rep.output_dir);
  std::ofstream out(rep.output_dir / "report.txt");
  if (!out) throw IoError("cannot write " + (rep.output_dir / "report.txt").string());
  out << format_report(rep);
}

std::filesystem::path output_root() {
  if (const char* env = std::getenv("QFC_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
  return "qfc_output";
}

}  // namespace qfc
