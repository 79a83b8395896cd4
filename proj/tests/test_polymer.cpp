#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <random>

#include "loggamma/polymer.hpp"
#include "loggamma/scaling.hpp"

using namespace loggamma;

TEST(Polymer, PathCount) {
  EXPECT_EQ(polymer::path_count(1, 7), 1);
  EXPECT_EQ(polymer::path_count(3, 3), 6);
  EXPECT_EQ(polymer::path_count(5, 6), 126);
  EXPECT_EQ(polymer::path_count(30, 30), -1);
}

TEST(Polymer, RecursionMatchesEnumeration) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (auto [M, N] : {std::pair{1L, 1L}, {1L, 6L}, {4L, 3L}, {6L, 6L}}) {
    std::vector<std::vector<double>> w(M, std::vector<double>(N)), lw(M, std::vector<double>(N));
    for (long i = 0; i < M; ++i) {
      for (long j = 0; j < N; ++j) {
        w[i][j] = u(g);
        lw[i][j] = std::log(w[i][j]);
      }
    }
    EXPECT_NEAR(polymer::log_partition_weights(lw), polymer::enumerate_paths(M, N, w), 1e-12);
  }
}

TEST(Polymer, GammaSamplerMoments) {
  RngStream rng(5, 0);
  for (double shape : {0.3, 1.0, 2.5}) {
    double s = 0.0, s2 = 0.0, ls = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      const double x = rng.gamma_variate(shape);
      s += x;
      s2 += x * x;
      ls += rng.log_gamma_variate(shape);
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, shape, 5 * std::sqrt(shape / n));
    EXPECT_NEAR(var, shape, 0.05 * shape + 0.02);
    EXPECT_NEAR(ls / n, boost::math::digamma(shape), 5 * std::sqrt(boost::math::trigamma(shape) / n));
  }
}

TEST(Polymer, SingleCellLogMean) {
  // log Z = log w with w inverse-gamma(theta): E[log w] = -Psi(theta).
  const auto spec = ModelSpec::homogeneous(1, 1, 1.7);
  const auto sc = scaling::scaling_constants({1, 1, 1.7});
  const auto b = polymer::run_batch(spec, {1, 1, 1.7}, sc, 100000, 3, 1);
  double m = 0.0;
  for (double v : b.log_Z) m += v;
  m /= b.n_samples;
  EXPECT_NEAR(m, -boost::math::digamma(1.7), 5 * std::sqrt(boost::math::trigamma(1.7) / 1e5));
}

TEST(Polymer, LinearAndLogSpaceRecursionsAgreeInLaw) {
  const auto spec = ModelSpec::homogeneous(7, 5, 1.0);
  const int n = 40000;
  double a = 0.0, a2 = 0.0, b = 0.0, b2 = 0.0;
  for (int k = 0; k < n; ++k) {
    RngStream r1(21, k), r2(22, k);
    const double x = polymer::detail::log_partition_linear(spec, r1);
    const double y = polymer::detail::log_partition_logspace(spec, r2);
    a += x; a2 += x * x; b += y; b2 += y * y;
  }
  const double ma = a / n, mb = b / n;
  const double se = std::sqrt((a2 / n - ma * ma + b2 / n - mb * mb) / n);
  EXPECT_NEAR(ma, mb, 5 * se);
}

TEST(Polymer, BatchIsThreadIndependent) {
  const auto spec = ModelSpec::homogeneous(20, 15, 1.0);
  const ModelShape shape{20, 15, 1.0};
  const auto sc = scaling::scaling_constants(shape);
  const auto b1 = polymer::run_batch(spec, shape, sc, 64, 99, 1);
  const auto b3 = polymer::run_batch(spec, shape, sc, 64, 99, 3);
  EXPECT_EQ(b1.log_Z, b3.log_Z);
  EXPECT_EQ(b1.F, b3.F);
}

TEST(Polymer, LargeLatticeFreeEnergyWithTracyWidomShift) {
  // Finite-M mean of log Z / M: -h plus the Tracy-Widom mean times sigma M^{-2/3}.
  const ModelShape shape{400, 400, 1.0};
  const auto sc = scaling::scaling_constants(shape);
  const auto b = polymer::run_batch(ModelSpec::homogeneous(400, 400, 1.0), shape, sc, 200, 17, 1);
  double m = 0.0;
  for (double v : b.log_Z) m += v / 400.0;
  m /= b.n_samples;
  const double expected = -sc.h - 1.7710868 * sc.sigma * std::pow(400.0, -2.0 / 3.0);
  EXPECT_NEAR(m, expected, 0.01);
}

TEST(Polymer, LaplaceTermGuards) {
  EXPECT_EQ(polymer::laplace_term(800.0, 0.0), 0.0);
  EXPECT_EQ(polymer::laplace_term(-800.0, 0.0), 1.0);
  EXPECT_NEAR(polymer::laplace_term(0.0, 0.0), std::exp(-1.0), 1e-15);
  const auto spec = ModelSpec::homogeneous(2, 2, 1.0);
  EXPECT_EQ(polymer::mc_laplace(0.0, spec, 10, 1).estimate, 1.0);
}

TEST(Polymer, BbpSpecLayout) {
  const ModelShape shape{64, 64, 1.0};
  const auto sc = scaling::scaling_constants(shape);
  const auto spec = polymer::build_bbp_spec(shape, {{-0.5}, {0.5, 1.0}}, sc);
  EXPECT_EQ(spec.N_total(), 65);
  EXPECT_EQ(spec.M_total(), 66);
  const double s = 1.0 / (sc.sigma * std::cbrt(64.0));
  EXPECT_NEAR(spec.a[0], sc.z_c - 0.5 * s, 1e-15);
  EXPECT_NEAR(spec.alpha[1], sc.z_c + 1.0 * s, 1e-15);
  EXPECT_THROW(polymer::build_bbp_spec(shape, {{1.0}, {0.5}}, sc), DomainError);
}

TEST(Polymer, InvalidSpecsRejected) {
  ModelSpec s;
  s.a = {0.5};
  s.alpha = {0.5};
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_THROW(polymer::run_batch(ModelSpec::homogeneous(2, 2, 1.0), {2, 2, 1.0}, {}, 0, 1), DomainError);
}
