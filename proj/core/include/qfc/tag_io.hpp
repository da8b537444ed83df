#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qfc/correlation.hpp"
#include "qfc/fitting.hpp"
#include "qfc/photon.hpp"

namespace qfc {

/// Eight-byte magic that opens a binary tag file, followed by 9-byte little-endian records
/// (u8 channel, i64 timestamp in ps).
inline constexpr char kQtagMagic[8] = {'Q', 'T', 'A', 'G', '0', '0', '0', '1'};

void write_qtag(const std::filesystem::path& path, std::span<const TimeTag> tags);
TagList read_qtag(const std::filesystem::path& path);

/// CSV with header `channel,timestamp_ps`.
void write_tags_csv(const std::filesystem::path& path, std::span<const TimeTag> tags);
TagList read_tags_csv(const std::filesystem::path& path);

/// Reads either format; binary files are recognized by their magic.
TagList read_tags(const std::filesystem::path& path);

/// Tags of one channel, in file order.
TagList select_channel(std::span<const TimeTag> tags, std::uint8_t channel);

/// Shortest round-trip text for a double (printf %.17g trimmed to the shortest exact form).
std::string format_number(double value);

/// CSV with header `tau_ps,counts,g2`; g2 printed with 9 significant digits.
void write_g2_csv(const std::filesystem::path& path, std::span<const G2Point> curve);
std::string g2_csv_text(std::span<const G2Point> curve);
std::vector<G2Point> read_g2_csv(const std::filesystem::path& path);

/// Two-column numeric CSV (header `x,y` unless given).
void write_curve_csv(const std::filesystem::path& path, std::span<const CurvePoint> points,
                     const std::string& header = "x,y");
/// Reads the first two columns of a CSV with a one-line header.
std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path);

/// Generic numeric table: header line, then one row per record.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws std::out_of_range for an unknown column.
  std::vector<double> column(const std::string& name) const;
};
Table read_table_csv(const std::filesystem::path& path);

/// `key = value` lines: each parameter with its error, then chi2, dof, reduced_chi2,
/// iterations, converged and any warnings.
std::string format_fit_report(const FitResult& fit, const std::string& prefix = "");

}  // namespace qfc
