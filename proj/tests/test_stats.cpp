#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "loggamma/stats.hpp"

using namespace loggamma;

TEST(Stats, KsOfUniformSampleIsSmall) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u;
  std::vector<double> s(20000);
  for (auto& x : s) x = u(g);
  const double d = stats::ks_statistic(s, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_LT(d, 1.63 / std::sqrt(20000.0));
  EXPECT_GT(stats::ks_pvalue(d, s.size()), 0.01);
}

TEST(Stats, KsExactSmallCase) {
  // Sample {0.5} against U(0,1): sup distance is 0.5.
  EXPECT_DOUBLE_EQ(stats::ks_statistic({0.5}, [](double x) { return x; }), 0.5);
  EXPECT_DOUBLE_EQ(stats::ks_two_sample({1, 2, 3}, {10, 11}), 1.0);
}

TEST(Stats, KsPvalueKnownValues) {
  // Kolmogorov limit: P(sqrt(n) D > 1.358) ~= 0.05.
  EXPECT_NEAR(stats::ks_pvalue(1.3581 / std::sqrt(1e6), 1000000), 0.05, 1e-3);
}

TEST(Stats, WilsonInterval) {
  const auto w = stats::wilson_interval(10, 100, 0.95);
  EXPECT_NEAR(w.lo, 0.0552, 1e-3);
  EXPECT_NEAR(w.hi, 0.1744, 1e-3);
  const auto z = stats::wilson_interval(0, 50, 0.99);
  EXPECT_EQ(z.lo, 0.0);
  EXPECT_GT(z.hi, 0.0);
  EXPECT_THROW(stats::wilson_interval(5, 3), DomainError);
}

TEST(Stats, LinearFitRecoversLine) {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(2.5 - 0.75 * v);
  const auto f = stats::linear_fit(x, y);
  EXPECT_NEAR(f.slope, -0.75, 1e-14);
  EXPECT_NEAR(f.intercept, 2.5, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

TEST(Stats, TabulatedCdfIsMonotoneAndClamped) {
  stats::TabulatedCdf F({0, 1, 2, 3}, {0.1, 0.05, 0.6, 1.2});
  EXPECT_EQ(F(-1), 0.0);
  EXPECT_EQ(F(4), 1.0);
  EXPECT_DOUBLE_EQ(F(1), 0.1);
  EXPECT_DOUBLE_EQ(F(2.5), 0.8);
  EXPECT_THROW(stats::TabulatedCdf({0, 0}, {0, 1}), DomainError);
}

TEST(Stats, MeanFromCdfOfNormal) {
  std::vector<double> x, F;
  for (int k = 0; k <= 400; ++k) {
    x.push_back(-9 + 0.05 * k);
    F.push_back(0.5 * std::erfc(-(x.back() - 1.0) / std::sqrt(2.0)));
  }
  EXPECT_NEAR(stats::mean_from_cdf(x, F), 1.0, 1e-6);
}

TEST(Stats, WeightedFitReducesToOrdinaryWithEqualWeights) {
  const std::vector<double> x{0, 1, 2, 3}, y{1.0, 2.9, 5.2, 6.8};
  const auto a = stats::linear_fit(x, y), b = stats::weighted_linear_fit(x, y, {2, 2, 2, 2});
  EXPECT_NEAR(a.slope, b.slope, 1e-14);
  EXPECT_NEAR(a.intercept, b.intercept, 1e-14);
  EXPECT_NEAR(a.r2, b.r2, 1e-14);
  const auto c = stats::weighted_linear_fit(x, y, {1e6, 1e6, 1e-6, 1e-6});
  EXPECT_NEAR(c.slope, 1.9, 1e-5);
  EXPECT_THROW(stats::weighted_linear_fit(x, y, {1, 0, 1, 1}), DomainError);
}
