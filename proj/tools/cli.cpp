#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "qfc/correlation.hpp"
#include "qfc/error.hpp"
#include "qfc/experiments.hpp"
#include "qfc/fitting.hpp"
#include "qfc/scenario.hpp"
#include "qfc/tag_io.hpp"

namespace qfc::cli {

std::int64_t parse_duration_ps(std::string_view text) {
  static constexpr std::pair<std::string_view, double> kUnits[] = {
      {"ps", 1.0}, {"ns", 1e3}, {"us", 1e6}, {"ms", 1e9}, {"s", 1e12}};
  std::string_view number = text;
  double scale = 1.0;
  for (const auto& [suffix, factor] : kUnits) {
    if (text.size() > suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
      number = text.substr(0, text.size() - suffix.size());
      scale = factor;
      break;
    }
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(std::string(number), &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a duration: '" + std::string(text) + "'");
  }
  if (used != number.size()) throw std::invalid_argument("not a duration: '" + std::string(text) + "'");
  const double ps = value * scale;
  if (!std::isfinite(ps) || std::abs(ps - std::nearbyint(ps)) > 1e-6 * std::max(1.0, std::abs(ps))) {
    throw std::invalid_argument("duration is not a whole number of picoseconds: '" + std::string(text) + "'");
  }
  return static_cast<std::int64_t>(std::nearbyint(ps));
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TagList load_sorted(const std::string& path, int channel) {
  TagList tags = read_tags(path);
  if (channel >= 0) tags = select_channel(tags, static_cast<std::uint8_t>(channel));
  std::stable_sort(tags.begin(), tags.end(),
                   [](const TimeTag& a, const TimeTag& b) { return a.timestamp < b.timestamp; });
  return tags;
}

void print_fringe(std::ostream& out, const FringeResult& f) {
  out << "offset = " << format_number(f.offset) << '\n';
  out << "amplitude = " << format_number(f.amplitude) << '\n';
  out << "phase = " << format_number(f.phase) << '\n';
  out << "i_max = " << format_number(f.i_max) << '\n';
  out << "i_min = " << format_number(f.i_min) << '\n';
  out << "visibility = " << format_number(f.visibility) << '\n';
  out << "clamped = " << (f.clamped ? 1 : 0) << '\n';
  out << "zero_amplitude = " << (f.zero_amplitude ? 1 : 0) << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum frequency conversion photon-counting simulator and TCSPC analysis"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run a scenario file and write its report and CSV artifacts");
  run->add_option("scenario", scenario_path, "Scenario file (YAML)")->required();
  run->add_option("-o,--output", output_dir, "Output directory (default: $QFC_OUTPUT_ROOT/<name>)");

  std::string file_a, file_b, bin_text = "512ps", window_text = "51200ps", correlate_out;
  int channel_a = -1, channel_b = -1;
  auto* correlate = app.add_subcommand("correlate", "Cross-correlate two tag files into a g2 histogram");
  correlate->add_option("tags_a", file_a, "Start channel tag file (qtag or CSV)")->required();
  correlate->add_option("tags_b", file_b, "Stop channel tag file (qtag or CSV)")->required();
  correlate->add_option("--bin", bin_text, "Bin width, e.g. 512ps");
  correlate->add_option("--window", window_text, "Half-width of the histogram, e.g. 200ns");
  correlate->add_option("--channel-a", channel_a, "Use only this channel of the first file");
  correlate->add_option("--channel-b", channel_b, "Use only this channel of the second file");
  correlate->add_option("-o,--output", correlate_out, "Write the CSV here instead of stdout");

  std::string curve_path, model;
  auto* fit = app.add_subcommand("fit", "Fit a two-column curve CSV");
  fit->add_option("curve", curve_path, "CSV with x,y columns")->required();
  fit->add_option("--model", model, "Model")->required()->check(CLI::IsMember({"exp", "biexp", "sine", "sinc2"}));

  std::string tags_in, tags_out;
  auto* tags = app.add_subcommand("tags", "Tag file utilities");
  tags->require_subcommand(1);
  auto* convert = tags->add_subcommand("convert", "Convert between qtag and CSV (format from the output extension)");
  convert->add_option("input", tags_in, "Input tag file")->required();
  convert->add_option("output", tags_out, "Output file, .qtag or .csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qfcsim: usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run) {
      const Scenario s = load_scenario(scenario_path);
      const std::filesystem::path dir = output_dir.empty() ? output_root() / s.name : std::filesystem::path(output_dir);
      const RunReport rep = run_scenario(s, dir);
      out << "report = " << (dir / "report.txt").string() << '\n';
      for (const auto& [name, value] : rep.metrics) out << name << " = " << format_number(value) << '\n';
      for (const auto& w : rep.warnings) out << "warning = " << w << '\n';
    } else if (*correlate) {
      CorrelationConfig cfg;
      try {
        cfg.bin_width_ps = parse_duration_ps(bin_text);
        cfg.window_ps = parse_duration_ps(window_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (cfg.bin_width_ps > 0 && cfg.window_ps > 0 && cfg.window_ps % cfg.bin_width_ps != 0) {
        cfg.window_ps -= cfg.window_ps % cfg.bin_width_ps;
        err << "qfcsim: note: window rounded down to " << cfg.window_ps << " ps, a whole number of bins\n";
      }
      try {
        validate(cfg);
      } catch (const ContractError& e) {
        throw UsageError(e.what());
      }
      const TagList a = load_sorted(file_a, channel_a);
      const TagList b = load_sorted(file_b, channel_b);
      const auto hist = cross_correlate(a, b, cfg);
      const auto curve = normalize_g2(hist);
      if (correlate_out.empty()) {
        out << g2_csv_text(curve);
      } else {
        write_g2_csv(correlate_out, curve);
      }
    } else if (*fit) {
      const auto points = read_curve_csv(curve_path);
      if (model == "sine") {
        std::vector<double> phases, rates;
        for (const auto& p : points) {
          phases.push_back(p.x);
          rates.push_back(p.y);
        }
        print_fringe(out, fringe_scan(phases, rates));
      } else {
        FitResult result;
        if (model == "sinc2") {
          result = fit_sinc2(points);
        } else {
          BiexponentialOptions opt;
          opt.fix_weight_zero = model == "exp";
          result = fit_biexponential(points, opt);
        }
        out << "model = " << model << '\n' << format_fit_report(result);
      }
    } else if (*convert) {
      const TagList t = read_tags(tags_in);
      const auto ext = std::filesystem::path(tags_out).extension().string();
      if (ext == ".qtag") {
        write_qtag(tags_out, t);
      } else if (ext == ".csv") {
        write_tags_csv(tags_out, t);
      } else {
        throw UsageError("output extension must be .qtag or .csv");
      }
      out << "tags = " << t.size() << '\n';
    }
  } catch (const UsageError& e) {
    err << "qfcsim: usage error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "qfcsim: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "qfcsim: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qfc::cli
