#include "qfc/tag_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qfc/error.hpp"

namespace qfc {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    cell.erase(0, cell.find_first_not_of(' '));
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" + text + "'");
  }
}

long long parse_integer(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not an integer: '" + text + "'");
  }
}

std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_qtag(const std::filesystem::path& path, std::span<const TimeTag> tags) {
  auto out = open_out(path, true);
  out.write(kQtagMagic, sizeof kQtagMagic);
  std::array<char, 9> rec{};
  for (const auto& t : tags) {
    rec[0] = static_cast<char>(t.channel);
    auto u = static_cast<std::uint64_t>(t.timestamp);
    for (int i = 0; i < 8; ++i) rec[1 + i] = static_cast<char>((u >> (8 * i)) & 0xFF);
    out.write(rec.data(), rec.size());
  }
  if (!out) throw IoError("write failed: " + path.string());
}

TagList read_qtag(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kQtagMagic, sizeof magic) != 0) {
    throw IoError(path.string() + ": missing QTAG0001 magic");
  }
  TagList tags;
  std::array<unsigned char, 9> rec{};
  while (in.read(reinterpret_cast<char*>(rec.data()), rec.size())) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(rec[1 + i]) << (8 * i);
    tags.push_back(TimeTag{static_cast<Picoseconds>(u), rec[0]});
  }
  if (in.gcount() != 0) throw IoError(path.string() + ": truncated record at end of file");
  return tags;
}

void write_tags_csv(const std::filesystem::path& path, std::span<const TimeTag> tags) {
  auto out = open_out(path);
  out << "channel,timestamp_ps\n";
  for (const auto& t : tags) out << static_cast<int>(t.channel) << ',' << t.timestamp << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

TagList read_tags_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"channel", "timestamp_ps"}) {
    throw IoError(path.string() + ": expected header 'channel,timestamp_ps'");
  }
  TagList tags;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw IoError(path.string() + ":" + std::to_string(n) + ": expected 2 columns");
    const long long ch = parse_integer(cells[0], path, n);
    if (ch < 0 || ch > 255) throw IoError(path.string() + ":" + std::to_string(n) + ": channel out of range");
    tags.push_back(TimeTag{parse_integer(cells[1], path, n), static_cast<std::uint8_t>(ch)});
  }
  return tags;
}

TagList read_tags(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (in.gcount() == sizeof magic && std::memcmp(magic, kQtagMagic, sizeof magic) == 0) return read_qtag(path);
  return read_tags_csv(path);
}

TagList select_channel(std::span<const TimeTag> tags, std::uint8_t channel) {
  TagList out;
  for (const auto& t : tags)
    if (t.channel == channel) out.push_back(t);
  return out;
}

std::string format_number(double value) {
  char buf[40];
  if (std::isfinite(value) && value == std::trunc(value) && std::abs(value) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string g2_csv_text(std::span<const G2Point> curve) {
  std::string text = "tau_ps,counts,g2\n";
  for (const auto& p : curve) {
    text += std::to_string(p.tau_ps);
    text += ',';
    text += std::to_string(p.counts);
    text += ',';
    text += g9(p.g2);
    text += '\n';
  }
  return text;
}

void write_g2_csv(const std::filesystem::path& path, std::span<const G2Point> curve) {
  auto out = open_out(path, true);
  out << g2_csv_text(curve);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<G2Point> read_g2_csv(const std::filesystem::path& path) {
  const Table t = read_table_csv(path);
  const auto tau = t.column("tau_ps");
  const auto counts = t.column("counts");
  const auto g2 = t.column("g2");
  std::vector<G2Point> curve(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    curve[i] = G2Point{static_cast<Picoseconds>(tau[i]), static_cast<std::uint64_t>(counts[i]), g2[i]};
  }
  return curve;
}

void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> points,
                     const std::string& header) {
  auto out = open_out(path, true);
  out << header << '\n';
  for (const auto& p : points) out << format_number(p.x) << ',' << format_number(p.y) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path) {
  const Table t = read_table_csv(path);
  if (t.columns.size() < 2) throw IoError(path.string() + ": need at least two columns");
  std::vector<CurvePoint> points;
  for (const auto& row : t.rows) points.push_back({row[0], row[1]});
  return points;
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path, true);
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw ContractError("write_table_csv: row width differs from header");
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

Table read_table_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  t.columns = split_csv(line);
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != t.columns.size()) {
      throw IoError(path.string() + ":" + std::to_string(n) + ": expected " + std::to_string(t.columns.size()) +
                    " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, path, n));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string format_fit_report(const FitResult& fit, const std::string& prefix) {
  std::ostringstream out;
  for (const auto& p : fit.parameters) {
    out << prefix << p.name << " = " << format_number(p.value) << '\n';
    out << prefix << p.name << "_error = " << format_number(p.error) << '\n';
    if (p.fixed) out << prefix << p.name << "_fixed = 1\n";
  }
  out << prefix << "chi2 = " << format_number(fit.chi2) << '\n';
  out << prefix << "dof = " << fit.dof << '\n';
  out << prefix << "reduced_chi2 = " << format_number(fit.reduced_chi2) << '\n';
  out << prefix << "iterations = " << fit.iterations << '\n';
  out << prefix << "converged = " << (fit.converged ? 1 : 0) << '\n';
  for (const auto& w : fit.warnings) out << prefix << "warning = " << w << '\n';
  return out.str();
}

}  // namespace qfc
