#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace qfc {

/// Derives an independent 64-bit seed for a named substream of `root`.
/// The key is (name, index); adding a new substream never changes existing ones.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t index = 0);

/// Portable random source. The engine is std::mt19937_64 (output fully specified by the
/// standard); every distribution is implemented here rather than taken from <random>, whose
/// distribution algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential(double mean) { return -mean * std::log(uniform_open()); }
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

  /// Number of Bernoulli(p) trials up to and including the first success (>= 1).
  std::uint64_t geometric(double p);

  /// Gamma(shape, 1). Small integer shapes use a product of uniforms, larger ones
  /// Marsaglia-Tsang.
  double gamma(double shape);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace qfc
