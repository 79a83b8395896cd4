#include <gtest/gtest.h>

#include <cmath>

#include "loggamma/kernels.hpp"

using namespace loggamma;

namespace {

kernels::FiniteKernel make_kernel(double tau = 0.0) {
  const ModelShape shape{2, 9, 1.0};
  const auto sc = scaling::scaling_constants(shape);
  const auto spec = ModelSpec::homogeneous(2, 9, 1.0);
  const auto cp = kernels::default_contour(spec, shape, sc);
  return kernels::FiniteKernel(FiniteKernelSpec{spec, kernels::log_u_scaled(0.0, shape, sc), tau, cp.a, cp.b, cp.d});
}

cplx row_eval(const std::vector<cplx>& w, const std::vector<cplx>& f, cplx vp) {
  cplx s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += f[k] / (w[k] - vp);
  return s;
}

}  // namespace

TEST(Kernels, LiteralDetourMatchesResidueForm) {
  const auto K = make_kernel();
  const auto& ks = K.spec();
  // Near the vertex D_v is short, so both evaluations are accurate.
  for (double t : {0.05, 0.15}) {
    const cplx v = ks.a + t * std::polar(1.0, 3 * specfun::kPi / 4);
    const cplx vp = ks.a + 0.3 * std::polar(1.0, -3 * specfun::kPi / 4);
    std::vector<cplx> w1, f1, w2, f2;
    K.row_weights(v, 32, w1, f1);
    K.row_weights_detour(v, 32, w2, f2);
    const cplx a = row_eval(w1, f1, vp), b = row_eval(w2, f2, vp);
    EXPECT_LT(std::abs(a - b), 1e-9 * (1.0 + std::abs(a)));
  }
}

TEST(Kernels, CombinedAndFactoredExponentsAgree) {
  const auto K = make_kernel();
  const auto& ks = K.spec();
  for (double t : {0.1, 0.8, 2.5}) {
    const cplx v = ks.a + t * std::polar(1.0, 3 * specfun::kPi / 4);
    const cplx vp = ks.a + 0.4 * std::polar(1.0, -3 * specfun::kPi / 4);
    const cplx x = K.eval(v, vp, 24), y = K.eval_direct(v, vp, 24);
    EXPECT_LT(std::abs(x - y), 1e-9 * (1.0 + std::abs(x)));
  }
}

TEST(Kernels, TauDeformationIsContinuous) {
  const auto K0 = make_kernel(0.0), Kt = make_kernel(1e-4);
  const cplx v = K0.spec().a + 0.5 * std::polar(1.0, 3 * specfun::kPi / 4);
  const cplx vp = K0.spec().a + 0.2 * std::polar(1.0, -3 * specfun::kPi / 4);
  EXPECT_LT(std::abs(Kt.eval(v, vp) - K0.eval(v, vp)), 1e-3);
}

TEST(Kernels, FiniteSpecGeometryValidated) {
  const auto spec = ModelSpec::homogeneous(2, 9, 1.0);
  EXPECT_THROW(kernels::FiniteKernel(FiniteKernelSpec{spec, 0.0, 0.0, 0.6, 0.4, 0.01}), GeometryError);
  EXPECT_THROW(kernels::FiniteKernel(FiniteKernelSpec{spec, 0.0, 0.0, 0.3, 0.6, 0.2}), GeometryError);
  EXPECT_THROW(kernels::FiniteKernel(FiniteKernelSpec{spec, 0.0, -1.0, 0.3, 0.6, 0.05}), DomainError);
}

TEST(Kernels, DefaultContourIsAdmissible) {
  const ModelShape shape{64, 64, 1.0};
  const auto sc = scaling::scaling_constants(shape);
  const BBPLayout layout{{-0.5}, {0.6}};
  const auto spec = polymer::build_bbp_spec(shape, layout, sc);
  const auto cp = kernels::default_contour(spec, shape, sc, layout);
  EXPECT_GT(cp.a, spec.a[0]);
  EXPECT_LT(cp.b, spec.alpha[0]);
  EXPECT_LT(cp.a, cp.b);
  EXPECT_GT(cp.d, 0.0);
  EXPECT_LT(cp.d, std::min(0.25, (cp.b - cp.a) / 4.0));
}

TEST(Kernels, LimitSpecDefaultsAndValidation) {
  const auto s = kernels::LimitKernelSpec::defaults({-0.5}, {0.5}, 0.0);
  EXPECT_DOUBLE_EQ(s.mu, 0.0);
  EXPECT_DOUBLE_EQ(s.rho, 0.25);
  EXPECT_NO_THROW(s.validate());
  auto bad = s;
  bad.b = 0.7;
  EXPECT_THROW(bad.validate(), GeometryError);
  EXPECT_THROW(kernels::LimitKernelSpec::defaults({1.0}, {0.5}, 0.0).validate(), DomainError);
}
