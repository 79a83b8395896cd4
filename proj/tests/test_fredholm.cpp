#include <gtest/gtest.h>

#include <cmath>

#include "loggamma/fredholm.hpp"
#include "loggamma/oracle/airy_determinant.hpp"

using namespace loggamma;

TEST(Fredholm, DeterminantOfKnownMatrix) {
  Eigen::MatrixXcd A(2, 2);
  A << 1.0, 2.0, 0.5, 0.5;
  EXPECT_LT(std::abs(fredholm::det_identity_plus(A) - cplx(2.0)), 1e-14);
  Eigen::MatrixXcd S = -Eigen::MatrixXcd::Identity(3, 3);
  EXPECT_THROW(fredholm::det_identity_plus(S), NumericError);
}

TEST(Fredholm, RankOneKernel) {
  // K(x, y) = f(x) g(y) on a discretized segment: det = 1 + int f g.
  QuadratureGrid g;
  const auto& r = quad::gauss_legendre(20);
  for (int k = 0; k < 20; ++k) {
    g.nodes.push_back(0.5 * (r.nodes[k] + 1.0));
    g.weights.push_back(0.5 * r.weights[k]);
  }
  const cplx d = fredholm::fredholm_det([](cplx x, cplx y) { return std::exp(x) * y; }, g);
  EXPECT_NEAR(d.real(), 2.0, 1e-13);  // 1 + int_0^1 x e^x dx = 2
}

TEST(Fredholm, AiryOracleKnownValues) {
  EXPECT_NEAR(oracle::tracy_widom_gue(-2.0), 0.41322414250512257, 1e-9);
  EXPECT_NEAR(oracle::tracy_widom_gue(0.0), 0.96937282835526, 1e-9);
  EXPECT_NEAR(oracle::tracy_widom_mean(), -1.7710868074116, 1e-8);
}

TEST(Fredholm, GueFromLimitKernelMatchesOracle) {
  for (double r : {-3.0, -1.0, 0.5, 2.0}) {
    const DetResult d = fredholm::f_gue_det(r);
    EXPECT_NEAR(d.value.real(), oracle::tracy_widom_gue(r), 1e-8) << "r=" << r;
    EXPECT_LT(d.est_error, 1e-8);
    EXPECT_GT(d.grid_sizes.second, d.grid_sizes.first);
  }
}

TEST(Fredholm, BbpStructure) {
  for (double r : {-2.0, 0.0, 1.0}) {
    EXPECT_NEAR(fredholm::f_bbp({}, {}, r), fredholm::f_gue(r), 1e-9);
    const double base = fredholm::f_bbp({-0.4}, {0.6}, r);
    EXPECT_NEAR(fredholm::f_bbp({-0.6}, {0.4}, r), base, 1e-9);
    EXPECT_NEAR(fredholm::f_bbp({-0.4}, {0.6}, r, {}, std::pair{-0.2, 0.3}), base, 1e-8);
  }
  // Extra column perturbation with small y shifts mass to the right.
  EXPECT_LT(fredholm::f_bbp({}, {0.0}, 0.0), fredholm::f_gue(0.0));
}

TEST(Fredholm, FiniteLaplaceFrozenValues) {
  // Values cross-checked against 10^6-sample Monte Carlo.
  {
    const ModelShape shape{2, 9, 1.0};
    const auto sc = scaling::scaling_constants(shape);
    const auto spec = ModelSpec::homogeneous(2, 9, 1.0);
    const DetResult d = fredholm::finite_laplace(kernels::log_u_scaled(0.0, shape, sc), spec,
                                                 kernels::default_contour(spec, shape, sc));
    EXPECT_NEAR(d.value.real(), 0.96566420, 2e-8);
    EXPECT_NEAR(d.value.imag(), 0.0, 1e-9);
  }
  {
    const ModelShape shape{1, 9, 2.0};
    const auto sc = scaling::scaling_constants(shape);
    const auto spec = ModelSpec::homogeneous(1, 9, 2.0);
    const DetResult d = fredholm::finite_laplace(kernels::log_u_scaled(0.0, shape, sc), spec,
                                                 kernels::default_contour(spec, shape, sc));
    EXPECT_NEAR(d.value.real(), 0.948562657204, 1e-9);
  }
}

TEST(Fredholm, LegacyMatchesTauDeformedFinite) {
  const ModelShape shape{2, 9, 2.5};
  const auto sc = scaling::scaling_constants(shape);
  const auto spec = ModelSpec::homogeneous(2, 9, 2.5);
  const double lu = kernels::log_u_scaled(0.0, shape, sc);
  const DetResult L = fredholm::legacy_laplace(lu, spec, 1.0);
  const DetResult F = fredholm::finite_laplace(lu, spec, kernels::default_contour(spec, shape, sc), {}, 1.0);
  EXPECT_NEAR(L.value.real(), 0.7480520157096, 1e-9);
  EXPECT_LT(std::abs(L.value - F.value), 1e-8);
}

TEST(Fredholm, SmallNRequiresOptIn) {
  const auto spec = ModelSpec::homogeneous(2, 3, 1.0);
  EXPECT_THROW(fredholm::finite_laplace(0.0, spec, kernels::default_contour(spec)), DomainError);
  // With N = 3 the row mass decays like a low power of |v|; the solver refuses
  // the resulting grid instead of allocating it.
  EXPECT_THROW(fredholm::finite_laplace(0.0, spec, kernels::default_contour(spec), {}, 0.0, true), ConvergenceError);
}

TEST(Fredholm, FiniteCdfBracketIsOrdered) {
  const ModelShape shape{3, 10, 1.0};
  const auto sc = scaling::scaling_constants(shape);
  const auto c = fredholm::finite_cdf(0.0, shape, sc, {});
  EXPECT_LE(c.lower, c.value);
  EXPECT_LE(c.value, c.upper);
}
