#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qfc/random.hpp"
#include "support.hpp"

namespace qfc {
namespace {

TEST(DeriveSeed, DeterministicAndDistinctPerSubstream) {
  EXPECT_EQ(derive_seed(7, "signal", 0), derive_seed(7, "signal", 0));
  std::set<std::uint64_t> seen;
  for (const char* name : {"signal", "background", "detector_a", "detector_b"}) {
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(7, name, i));
  }
  EXPECT_EQ(seen.size(), 200u);
  EXPECT_NE(derive_seed(7, "signal"), derive_seed(8, "signal"));
}

TEST(Rng, SameSeedSameSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformStaysInUnitInterval) {
  Rng rng(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, ExponentialPassesKolmogorovSmirnov) {
  Rng rng(2);
  std::vector<double> x(100000);
  for (auto& v : x) v = rng.exponential(2600.0);
  const double d = test::ks_statistic(x, [](double t) { return 1.0 - std::exp(-t / 2600.0); });
  EXPECT_LT(d, test::ks_critical_01(x.size()));
}

TEST(Rng, NormalPassesKolmogorovSmirnov) {
  Rng rng(3);
  std::vector<double> x(100000);
  for (auto& v : x) v = rng.normal(0.0, 250.0);
  const double d =
      test::ks_statistic(x, [](double t) { return 0.5 * std::erfc(-t / (250.0 * std::sqrt(2.0))); });
  EXPECT_LT(d, test::ks_critical_01(x.size()));
}

TEST(Rng, GammaMeanAndVarianceMatchShape) {
  for (double shape : {0.5, 3.0, 20.0, 250.5}) {
    Rng rng(4);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, shape, 5.0 * std::sqrt(shape / n)) << shape;
    EXPECT_NEAR(var / shape, 1.0, 0.05) << shape;
  }
}

TEST(Rng, GeometricMeanIsInverseProbability) {
  Rng rng(5);
  const double p = 0.01;
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto k = rng.geometric(p);
    ASSERT_GE(k, 1u);
    s += static_cast<double>(k);
  }
  const double sd = std::sqrt((1.0 - p) / (p * p) / n);
  EXPECT_NEAR(s / n, 1.0 / p, 4.0 * sd);
  EXPECT_EQ(rng.geometric(1.0), 1u);
}

}  // namespace
}  // namespace qfc
