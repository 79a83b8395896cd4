#include <gtest/gtest.h>

#include <boost/math/special_functions/airy.hpp>

#include <cmath>

#include "loggamma/contour.hpp"
#include "loggamma/quadrature.hpp"

using namespace loggamma;
using contour::kPi;

namespace {

cplx integrate(const QuadratureGrid& g, const std::function<cplx(cplx)>& f) {
  cplx s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.weights[k] * f(g.nodes[k]);
  return s;
}

QuadratureGrid airy_grid(cplx vertex, double x) {
  DiscretizeOptions o;
  o.panel_order = 24;
  o.tail_tolerance = 1e-16;
  o.log_envelope = [x](cplx t) { return (t * t * t / 3.0 - x * t).real(); };
  return contour::discretize(contour::build_ray_contour(vertex, kPi / 3), o);
}

}  // namespace

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
  for (int n : {4, 16, 48}) {
    const auto& r = quad::gauss_legendre(n);
    double s0 = 0.0, s2 = 0.0, s_hi = 0.0;
    for (int k = 0; k < n; ++k) {
      s0 += r.weights[k];
      s2 += r.weights[k] * r.nodes[k] * r.nodes[k];
      s_hi += r.weights[k] * std::pow(r.nodes[k], 2 * n - 2);
    }
    EXPECT_NEAR(s0, 2.0, 1e-14);
    EXPECT_NEAR(s2, 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(s_hi, 2.0 / (2 * n - 1), 1e-13);
  }
}

TEST(Contour, AiryIntegralOnWedge) {
  // Ai(x) = (2 pi i)^{-1} int exp(t^3/3 - x t) dt over C_{c, pi/3}.
  for (double x : {-2.0, 0.0, 1.5}) {
    const cplx I = integrate(airy_grid(cplx(1.0, 0.0), x), [x](cplx t) { return std::exp(t * t * t / 3.0 - x * t); });
    EXPECT_NEAR(I.real(), boost::math::airy_ai(x), 1e-12);
    EXPECT_NEAR(I.imag(), 0.0, 1e-12);
  }
}

TEST(Contour, ShiftingVertexAcrossPolePicksUpResidue) {
  const cplx z(1.0, 0.3);
  auto f = [z](cplx t) { return std::exp(t * t * t / 3.0) / (t - z); };
  const cplx left = integrate(airy_grid(cplx(0.0, 0.0), 0.0), f);
  const cplx right = integrate(airy_grid(cplx(2.0, 0.0), 0.0), f);
  EXPECT_LT(std::abs(right - left - std::exp(z * z * z / 3.0)), 1e-11);
}

TEST(Contour, LiesLeftAndDistance) {
  const Contour c = contour::build_ray_contour(cplx(1.0, 0.0), kPi / 4);
  EXPECT_TRUE(contour::lies_left(c, cplx(0.0, 0.0)));
  EXPECT_FALSE(contour::lies_left(c, cplx(2.0, 0.0)));
  EXPECT_NEAR(contour::distance_to_contour(c, cplx(1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(contour::distance_to_contour(c, cplx(0.0, 0.0)), 1.0, 1e-15);
}

TEST(Contour, DetourSeparatesVFromItsShift) {
  const cplx v(0.2, 0.7), b(0.5, 0.0);
  const double d = 0.1;
  const Contour c = contour::build_detour_contour(v, b, kPi / 4, d);
  EXPECT_TRUE(contour::lies_left(c, v));
  EXPECT_FALSE(contour::lies_left(c, v + 1.0));
  EXPECT_NEAR(contour::distance_to_contour(c, v), 2 * d, 1e-12);
  EXPECT_THROW(contour::build_detour_contour(v, b, kPi / 4, 0.5), GeometryError);
  EXPECT_THROW(contour::build_detour_contour(v, b, kPi / 4, 0.0), GeometryError);
}

TEST(Contour, LimitContourHasVerticalSegment) {
  const Contour c = contour::build_limit_contour(0.0, 0.5);
  EXPECT_TRUE(contour::lies_left(c, cplx(0.4, 0.0)));
  EXPECT_FALSE(contour::lies_left(c, cplx(0.6, 0.0)));
  EXPECT_THROW(contour::build_limit_contour(0.0, 0.0), DomainError);
}

TEST(Contour, TruncationRespectsTolerance) {
  DiscretizeOptions o;
  o.panel_order = 16;
  o.tail_tolerance = 1e-12;
  o.log_envelope = [](cplx t) { return (t * t * t / 3.0).real(); };
  const QuadratureGrid g = contour::discretize(contour::build_ray_contour(0.0, kPi / 3), o);
  EXPECT_LE(g.tail_estimate, 1e-12);
  EXPECT_GT(g.truncation_radius, 3.0);
  EXPECT_EQ(g.size() % 16, 0u);
}

TEST(Contour, NonDecayingEnvelopeThrows) {
  DiscretizeOptions o;
  o.log_envelope = [](cplx) { return 0.0; };
  EXPECT_THROW(contour::discretize(contour::build_ray_contour(0.0, kPi / 3), o), ConvergenceError);
}
