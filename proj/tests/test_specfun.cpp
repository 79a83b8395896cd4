#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <cmath>
#include <complex>

#include "loggamma/specfun.hpp"

using namespace loggamma;
using specfun::kPi;

namespace {

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

TEST(Specfun, LogGammaMatchesBoostOnRealAxis) {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 1.5, 3.7, 10.0, 55.5, 300.0}) {
    EXPECT_NEAR(specfun::log_gamma(x), boost::math::lgamma(x), 1e-12 * std::max(1.0, std::abs(boost::math::lgamma(x))));
  }
}

TEST(Specfun, LogGammaNegativeRealNonInteger) {
  for (double x : {-0.5, -1.3, -4.7}) {
    const std::complex<double> lg = specfun::log_gamma(std::complex<double>(x, 0.0));
    EXPECT_NEAR(lg.real(), std::log(std::abs(boost::math::tgamma(x))), 1e-11);
  }
}

TEST(Specfun, DigammaMatchesBoost) {
  for (double x : {0.01, 0.3, 1.0, 2.5, 9.0, 120.0}) {
    EXPECT_NEAR(specfun::digamma(x), boost::math::digamma(x), 1e-12 * std::max(1.0, std::abs(boost::math::digamma(x))));
  }
  EXPECT_NEAR(specfun::digamma(1.0), -specfun::kEulerGamma, 1e-14);
}

TEST(Specfun, PolygammaSumsMatchBoost) {
  // polygamma_sum(k, x) = sum_n (x + n)^{-k}; psi^{(k-1)} = (-1)^k (k-1)! times it.
  for (double x : {0.05, 0.7, 3.0, 40.0}) {
    EXPECT_NEAR(specfun::polygamma_sum(2, x), boost::math::polygamma(1, x), 1e-12 * boost::math::polygamma(1, x));
    EXPECT_NEAR(specfun::polygamma_sum(3, x), -0.5 * boost::math::polygamma(2, x), -1e-12 * boost::math::polygamma(2, x));
  }
}

TEST(Specfun, ComplexRecurrences) {
  const std::complex<double> pts[] = {{0.3, 0.2}, {2.5, -7.0}, {-3.4, 1.1}, {20.0, 60.0}, {-0.5, -0.01}};
  for (auto z : pts) {
    const auto d = specfun::log_gamma(z + 1.0) - specfun::log_gamma(z) - std::log(z);
    EXPECT_LT(std::abs(std::complex<double>(d.real(), wrap(d.imag()))), 1e-11);
    const auto e = specfun::digamma(z + 1.0) - specfun::digamma(z) - 1.0 / z;
    EXPECT_LT(std::abs(e), 1e-11 * (1.0 + std::abs(specfun::digamma(z))));
  }
}

TEST(Specfun, ReflectionHasMinusSign) {
  for (std::complex<double> s : {std::complex<double>(0.3, 0.2), std::complex<double>(-1.7, 0.5), std::complex<double>(2.2, -1.0)}) {
    const auto lhs = std::exp(specfun::log_gamma(-s) + specfun::log_gamma(1.0 + s));
    const auto rhs = -specfun::recip_sin_pi(s);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::abs(rhs));
  }
}

TEST(Specfun, StirlingGrowthAlongVerticalLine) {
  // |Gamma(x + iy)| ~ sqrt(2 pi) |y|^{x - 1/2} e^{-pi |y| / 2}.
  const double x = 0.7;
  for (double y : {50.0, 200.0}) {
    const double lhs = specfun::log_gamma(std::complex<double>(x, y)).real();
    const double rhs = 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(y) - kPi * y / 2.0;
    EXPECT_NEAR(lhs, rhs, 2.0 / y);
  }
}

TEST(Specfun, SineBoundAwayFromIntegers) {
  // |sin(pi s)| >= min(dist(s, Z), 1/2) e^{pi |Im s|} / 4.
  for (double re : {0.1, 0.3, 0.5, 0.77}) {
    for (double im : {-3.0, -0.2, 0.0, 1.0, 5.0}) {
      const std::complex<double> s(re, im);
      const double sinv = std::abs(kPi / specfun::recip_sin_pi(s));
      EXPECT_GE(sinv, 0.25 * std::min(specfun::distance_to_integers(s), 0.5) * std::exp(kPi * std::abs(im)));
    }
  }
}

TEST(Specfun, PolesAreRejected) {
  EXPECT_THROW(specfun::log_gamma(std::complex<double>(-2.0, 0.0)), DomainError);
  EXPECT_THROW(specfun::digamma(std::complex<double>(0.0, 0.0)), DomainError);
  EXPECT_THROW(specfun::recip_sin_pi(std::complex<double>(3.0, 0.0)), DomainError);
}
