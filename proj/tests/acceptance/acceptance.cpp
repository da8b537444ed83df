#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "qfc/correlation.hpp"
#include "qfc/detection.hpp"
#include "qfc/emitter.hpp"
#include "qfc/experiments.hpp"
#include "qfc/fitting.hpp"
#include "qfc/optics.hpp"
#include "qfc/scenario.hpp"
#include "support.hpp"

namespace {

using namespace qfc;

const std::filesystem::path kScenarios{QFC_SCENARIO_DIR};
std::filesystem::path g_out;

// Tolerances.
constexpr double kDfgLow = 1312.68, kDfgHigh = 1312.72;
constexpr double kEta150 = 0.32, kEta150Tol = 0.01;
constexpr double kEtaNorm = 1.15, kEtaNormRelTol = 0.05;
constexpr double kSnrMin = 20.0;
constexpr double kFwhm = 54.6, kFwhmTol = 0.1;
constexpr double kG2Vis = 0.39, kG2Ir = 0.24, kG2Tol = 0.05;
constexpr int kMinSeeds = 20;
constexpr double kSigmaSeparation = 3.0;
constexpr double kBinningDrop = 0.05;
constexpr double kDip = 0.44, kDipTol = 0.06;
constexpr double kDipDelayPs = 100000.0, kDipDelayTolPs = 1000.0;
constexpr double kT2Vis = 42.0, kT2VisTol = 17.0, kT2Ir = 49.0, kT2IrTol = 13.0, kT2ShiftMax = 1e-3;
constexpr double kTauVis = 2600.0, kTauVisTol = 200.0;
constexpr double kTauSlow = 2.5e6, kTauSlowRelTol = 0.20;
constexpr double kPoissonMeanTol = 0.01, kIdealG2Tol = 0.02;

struct Line {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

RunReport run_file(const std::string& stem) {
  const Scenario s = load_scenario(kScenarios / (stem + ".scn"));
  return run_scenario(s, g_out / stem);
}

bool within(double v, double center, double tol) { return std::abs(v - center) <= tol; }

void criterion_1(Line& l) {
  const double out = dfg_output_wavelength(710.74, 1549.90);
  l.check(out >= kDfgLow && out <= kDfgHigh, fmt("lambda_out = %.4f nm, required [%.2f, %.2f]", out, kDfgLow, kDfgHigh));
}

void criterion_2(Line& l) {
  const auto r = run_file("efficiency_sweep");
  const double eta = r.metric("efficiency_at_reference");
  l.check(within(eta, kEta150, kEta150Tol), fmt("eta(150 mW) = %.4f, required %.2f +- %.2f", eta, kEta150, kEta150Tol));
  const double en = r.metric("fitted_normalized_efficiency");
  l.check(std::abs(en - kEtaNorm) <= kEtaNormRelTol * kEtaNorm,
          fmt("fitted normalized efficiency = %.4f W^-1 cm^-2, required %.2f +- 5%%", en, kEtaNorm));
  const double snr_max = r.metric("snr_at_max");
  l.check(snr_max >= kSnrMin, fmt("SNR at maximum conversion (%.3f W) = %.2f, required >= 20",
                                  r.metric("power_at_max_w"), snr_max));
  const double snr_ref = r.metric("snr_at_reference");
  l.check(snr_ref >= kSnrMin, fmt("SNR at 150 mW = %.2f, required >= 20", snr_ref));
}

void criterion_3(Line& l) {
  // Monochromatic photons stepped across the acceptance band, converted by Monte Carlo.
  const ConversionSpec spec;
  PumpConfig pump;
  pump.power_w = optimal_pump_power(spec);
  const double p_conv = conversion_probability(pump, spec);
  const double nu0 = wavelength_to_ghz(spec.input_center_nm);
  const std::size_t n = 1'000'000;
  std::vector<CurvePoint> curve;
  for (int k = -20; k <= 20; ++k) {
    const double detuning = 5.0 * k;
    const auto lambda = static_cast<float>(kSpeedOfLightNmGHz / (nu0 + detuning));
    PhotonStream in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = PhotonEvent{static_cast<Picoseconds>(i) * 1000, lambda, Origin::signal};
    const auto out = convert_stream(in, pump, spec, 1e-3, derive_seed(3, "acceptance", static_cast<std::uint64_t>(k + 20)));
    const double sig = static_cast<double>(count_origins(out)[static_cast<std::size_t>(Origin::signal)]);
    curve.push_back({optical_detuning_ghz(lambda, spec.input_center_nm), sig / (static_cast<double>(n) * p_conv)});
  }
  const auto fit = fit_sinc2(curve);
  const double fwhm = fit.value("fwhm");
  l.check(within(fwhm, kFwhm, kFwhmTol),
          fmt("FWHM = %.3f +- %.3f GHz, required 54.6 +- 0.1", fwhm, fit.error("fwhm")));
}

void criterion_4_5(Line& l4, Line& l5) {
  const auto vis = run_file("hbt_visible");
  const auto ir = run_file("hbt_converted");
  const double gv = vis.metric("g2_zero"), sv = vis.metric("g2_zero_sem");
  const double gi = ir.metric("g2_zero"), si = ir.metric("g2_zero_sem");
  l4.check(vis.metric("repeats") >= kMinSeeds, fmt("seeds = %.0f, required >= 20", vis.metric("repeats")));
  l4.check(within(gv, kG2Vis, kG2Tol), fmt("g2(0) = %.4f +- %.4f (sem), required 0.39 +- 0.05", gv, sv));
  l4.check(within(vis.metric("source_snr"), 7.0, 0.5), fmt("source SNR = %.2f", vis.metric("source_snr")));
  l5.check(ir.metric("repeats") >= kMinSeeds, fmt("seeds = %.0f, required >= 20", ir.metric("repeats")));
  l5.check(within(gi, kG2Ir, kG2Tol), fmt("g2(0) = %.4f +- %.4f (sem), required 0.24 +- 0.05", gi, si));
  l5.check(within(ir.metric("converted_snr"), 12.0, 1.0), fmt("converted SNR = %.2f", ir.metric("converted_snr")));
  const double z = (gv - gi) / std::hypot(sv, si);
  l5.check(z >= kSigmaSeparation, fmt("g2_vis - g2_IR = %.4f, %.1f sigma, required >= 3 sigma", gv - gi, z));
}

void criterion_6(Line& l) {
  for (const char* stem : {"hbt_visible_fine", "hbt_converted_fine"}) {
    const auto r = run_file(stem);
    const double coarse = r.metric("g2_zero"), fine = r.metric("g2_zero_fine");
    l.check(coarse - fine >= kBinningDrop,
            std::string(stem) + fmt(": g2(0) 512 ps = %.4f, %.0f ps = %.4f", coarse, r.metric("fine_bin_ps"), fine) +
                fmt(", drop %.4f, required >= 0.05", coarse - fine));
  }
}

void criterion_7(Line& l) {
  const auto r = run_file("hbt_cross");
  const double dip = r.metric("dip_g2"), tau = r.metric("dip_tau_ps");
  l.check(within(dip, kDip, kDipTol),
          fmt("dip g2 = %.4f (3-bin mean %.4f), required 0.44 +- 0.06", dip, r.metric("dip_g2_smoothed")));
  l.check(within(tau, kDipDelayPs, kDipDelayTolPs), fmt("dip at %.0f ps, required 100 +- 1 ns", tau));
  l.check(r.metric("dip_significant") == 1.0, "converted arm carries signal above dark counts");
}

void criterion_8(Line& l) {
  const auto v = run_file("michelson_visible");
  const auto c = run_file("michelson_converted");
  l.check(within(v.metric("t2_ps"), kT2Vis, kT2VisTol),
          fmt("T2(vis) = %.2f +- %.2f ps, required 42 +- 17", v.metric("t2_ps"), v.metric("t2_error_ps")));
  l.check(within(c.metric("t2_ps"), kT2Ir, kT2IrTol),
          fmt("T2(IR) = %.2f +- %.2f ps, required 49 +- 13", c.metric("t2_ps"), c.metric("t2_error_ps")));
  l.check(c.metric("coherence_shift") < kT2ShiftMax,
          fmt("converted/input coherence shift = %.2e, required < 1e-3", c.metric("coherence_shift")));
}

void criterion_9(Line& l) {
  const auto v = run_file("lifetime_visible");
  const auto c = run_file("lifetime_converted");
  const auto s = run_file("lifetime_refill");
  const double tv = v.metric("tau_fast_ps"), ev = v.metric("tau_fast_error_ps");
  const double tc = c.metric("tau_fast_ps"), ec = c.metric("tau_fast_error_ps");
  l.check(within(tv, kTauVis, kTauVisTol), fmt("tau(vis) = %.0f +- %.0f ps, required 2600 +- 200", tv, ev));
  const bool overlap = tc + ec >= kTauVis - kTauVisTol && tc - ec <= kTauVis + kTauVisTol;
  l.check(overlap, fmt("tau(IR) = %.0f +- %.0f ps, band must overlap 2600 +- 200", tc, ec));
  const double ts = s.metric("tau_slow_ps");
  l.check(std::abs(ts - kTauSlow) <= kTauSlowRelTol * kTauSlow,
          fmt("tau_slow = %.3e +- %.1e ps, required 2.5e6 +- 20%%", ts, s.metric("tau_slow_error_ps")));
}

void criterion_10(Line& l) {
  {
    const TagList a = test::poisson_tags(1e4, 10.0, 0, 81);
    const TagList b = test::poisson_tags(1e4, 10.0, 1, 82);
    CorrelationConfig cfg{51200, 5'120'000};
    const auto curve = normalize_g2(cross_correlate(a, b, cfg));
    double mean = 0.0;
    for (const auto& p : curve) mean += p.g2;
    mean /= static_cast<double>(curve.size());
    l.check(within(mean, 1.0, kPoissonMeanTol), fmt("Poisson x Poisson mean g2 = %.4f, required 1.00 +- 0.01", mean));
  }
  {
    const auto r = run_file("hbt_ideal");
    const double g = r.metric("g2_zero_fine");
    l.check(within(g, 0.0, kIdealG2Tol),
            fmt("ideal source g2(0) = %.4f (%.0f ps bins), required 0 +- 0.02", g, r.metric("fine_bin_ps")));
  }
  {
    bool same = true, chunk_same = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const TagList a = test::random_tags(1000, 3'000'000, 0, seed);
      const TagList b = test::random_tags(1000, 3'000'000, 1, seed + 100);
      const CorrelationConfig cfg{512, 51200};
      const auto h = cross_correlate(a, b, cfg);
      same = same && h.counts == test::brute_force_counts(a, b, 512, 51200);
      const AcquisitionSpan sa{a.front().timestamp, a.back().timestamp}, sb{b.front().timestamp, b.back().timestamp};
      for (std::size_t chunks : {2u, 7u, 100u}) {
        chunk_same = chunk_same && cross_correlate_chunked(a, b, cfg, sa, sb, chunks, 2).counts == h.counts;
      }
    }
    l.check(same, "correlator equals brute-force all-pairs oracle on 1e3-tag fixtures");
    l.check(chunk_same, "chunk-merged histogram equals monolithic");
  }
  {
    Scenario s = load_scenario(kScenarios / "hbt_visible.scn");
    s.repeats = 2;
    s.duration_s = 0.1;
    run_scenario(s, g_out / "determinism_1");
    run_scenario(s, g_out / "determinism_2");
    bool same = true;
    for (const char* f : {"g2.csv", "g2_fine.csv", "per_seed.csv"}) {
      same = same && test::slurp(g_out / "determinism_1" / f) == test::slurp(g_out / "determinism_2" / f);
    }
    l.check(same, "same seed reproduces g2.csv, g2_fine.csv and per_seed.csv byte for byte");
  }
  {
    Rng rng(10);
    bool ok = true;
    const ConversionSpec conv;
    const EtalonSpec etalon;
    const FbgSpec fbg;
    for (int i = 0; i < 100000; ++i) {
      const double d = rng.uniform(-1e4, 1e4);
      PumpConfig pump;
      pump.power_w = rng.uniform(0.0, 2.0);
      for (double t : {acceptance_transmission(d, conv), etalon_transmission(d, etalon),
                       fbg_band_transmission(1312.714 + d * 1e-4, fbg), conversion_probability(pump, conv)}) {
        ok = ok && t >= 0.0 && t <= 1.0;
      }
    }
    l.check(ok, "all transmissions in [0,1] over 1e5 random inputs");
  }
  {
    const EmitterConfig src = calibrate_brightness(EmitterConfig{});
    const auto in = generate_signal_stream(src, 0.5, 20);
    const auto [p1, p2] = beamsplitter(in, 0.5, 21);
    bool ok = p1.size() + p2.size() == in.size();
    const auto filtered = apply_filter(in, [](const PhotonEvent&) { return 0.3; }, 22);
    ok = ok && filtered.size() <= in.size() && std::includes(in.begin(), in.end(), filtered.begin(), filtered.end(),
                                                              [](const PhotonEvent& x, const PhotonEvent& y) {
                                                                return x.timestamp < y.timestamp;
                                                              });
    const auto conv = convert_stream(in, PumpConfig{}, ConversionSpec{}, 0.5, 23);
    const auto co = count_origins(conv);
    ok = ok && co[static_cast<std::size_t>(Origin::signal)] <= in.size();
    DetectorSpec det = si_apd(0);
    det.dark_rate_hz = 0.0;
    ok = ok && detect(in, det, 0.5, 24).size() <= in.size();
    l.check(ok, "beamsplitter conserves counts; filter, conversion and detection only thin");
  }
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::temp_directory_path() / "qfc_acceptance";
  std::filesystem::create_directories(g_out);

  struct Criterion {
    int id;
    const char* name;
    std::function<void(Line&)> body;
  };
  Line l4, l5;
  bool hbt_done = false;
  auto hbt = [&](Line& target, Line& own) {
    if (!hbt_done) {
      criterion_4_5(l4, l5);
      hbt_done = true;
    }
    target = own;
  };
  const std::vector<Criterion> criteria{
      {1, "difference-frequency wavelength", criterion_1},
      {2, "conversion efficiency curve", criterion_2},
      {3, "acceptance bandwidth", criterion_3},
      {4, "antibunching, visible", [&](Line& l) { hbt(l, l4); }},
      {5, "antibunching, converted", [&](Line& l) { hbt(l, l5); }},
      {6, "binning sensitivity", criterion_6},
      {7, "cross-correlation dip", criterion_7},
      {8, "coherence time", criterion_8},
      {9, "lifetime", criterion_9},
      {10, "property suites", criterion_10},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Line line;
    try {
      c.body(line);
    } catch (const std::exception& e) {
      line.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %s\n", line.pass ? "PASS" : "FAIL", c.id, c.name);
    for (const auto& d : line.details) std::printf("       %s\n", d.c_str());
    std::fflush(stdout);
    failed += line.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
