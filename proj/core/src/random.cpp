#include "qfc/random.hpp"

#include <cmath>
#include <limits>

#include "qfc/units.hpp"

namespace qfc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t index) {
  std::uint64_t h = splitmix64(root);
  h = splitmix64(h ^ fnv1a(name));
  return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double phi = 2.0 * kPi * uniform();
  cached_normal_ = r * std::sin(phi);
  has_cached_normal_ = true;
  return r * std::cos(phi);
}

std::uint64_t Rng::geometric(double p) {
  if (p >= 1.0) return 1;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  const double k = std::floor(std::log(uniform_open()) / std::log1p(-p));
  if (k >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return 1 + static_cast<std::uint64_t>(k);
}

double Rng::gamma(double shape) {
  if (shape <= 0.0) return 0.0;
  if (shape == std::floor(shape) && shape <= 12.0) {
    double prod = 1.0;
    for (int i = 0; i < static_cast<int>(shape); ++i) prod *= uniform_open();
    return -std::log(prod);
  }
  if (shape < 1.0) {
    // Boost to shape+1, then scale by U^(1/shape).
    return gamma(shape + 1.0) * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace qfc
