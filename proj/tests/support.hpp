#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qfc/correlation.hpp"
#include "qfc/photon.hpp"
#include "qfc/random.hpp"

namespace qfc::test {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qfc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// One-sample Kolmogorov-Smirnov statistic D_n.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

/// Asymptotic critical value of D_n at significance 0.01.
inline double ks_critical_01(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// All-pairs correlator: every (a, b) pair whose lag rounds to a bin within the window.
inline std::vector<std::uint64_t> brute_force_counts(const TagList& a, const TagList& b, Picoseconds bin,
                                                     Picoseconds window) {
  const std::int64_t n = window / bin;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(2 * n + 1), 0);
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      const double tau = static_cast<double>(tb.timestamp - ta.timestamp);
      const double k = std::copysign(std::floor(std::abs(tau) / static_cast<double>(bin) + 0.5), tau);
      if (std::abs(k) <= static_cast<double>(n)) ++counts[static_cast<std::size_t>(k + static_cast<double>(n))];
    }
  }
  return counts;
}

/// Sorted uniform random tags on [0, span).
inline TagList random_tags(std::size_t n, Picoseconds span, std::uint8_t channel, std::uint64_t seed) {
  Rng rng(seed);
  TagList tags(n);
  for (auto& t : tags) t = TimeTag{static_cast<Picoseconds>(rng.uniform() * static_cast<double>(span)), channel};
  std::sort(tags.begin(), tags.end(), [](const TimeTag& x, const TimeTag& y) { return x.timestamp < y.timestamp; });
  return tags;
}

/// Poisson-process tags at `rate_hz` over `duration_s`.
inline TagList poisson_tags(double rate_hz, double duration_s, std::uint8_t channel, std::uint64_t seed) {
  Rng rng(seed);
  TagList tags;
  const double mean_gap = 1e12 / rate_hz;
  double t = rng.exponential(mean_gap);
  while (t < duration_s * 1e12) {
    tags.push_back(TimeTag{static_cast<Picoseconds>(t), channel});
    t += rng.exponential(mean_gap);
  }
  return tags;
}

}  // namespace qfc::test
