#pragma once
//
// Complex special functions: principal-branch log-gamma, digamma, the
// shifted power sums S_k(z) = sum_{n>=0} (n+z)^{-k}, and pi / sin(pi s).
//
// Every function validates pole proximity against kPoleThreshold and never
// returns a non-finite value; overflow is reported as an exception.
//

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "loggamma/errors.hpp"

namespace loggamma {

using cplx = std::complex<double>;

namespace specfun {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kPoleThreshold = 1e-8;

/// Controls partial sums of the S_k series.
struct SeriesTruncation {
  long max_terms = 1'000'000;
  double tail_tolerance = 1e-15;
};

namespace detail {

// B_{2k} for k = 1..10.
inline constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,        -1.0 / 30.0,       1.0 / 42.0,     -1.0 / 30.0,
    5.0 / 66.0,       -691.0 / 2730.0,   7.0 / 6.0,      -3617.0 / 510.0,
    43867.0 / 798.0,  -174611.0 / 330.0};

inline std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i)";
  return os.str();
}

inline void check_gamma_pole(cplx z, const char* what) {
  if (z.real() > 0.5) return;
  const double n = std::round(z.real());
  if (std::abs(z - cplx(n, 0.0)) < kPoleThreshold) {
    throw PoleError(std::string(what) + ": argument " + describe(z) +
                    " is within the pole threshold of a nonpositive integer");
  }
}

inline cplx finite_or_throw(cplx r, const char* what, cplx z) {
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
    throw OverflowError(std::string(what) + ": result not representable at " + describe(z));
  }
  return r;
}

// Number of unit shifts that moves z into the region Re >= 0, |z| >= 12
// where the asymptotic series are accurate to double precision.
inline int asymptotic_shift(cplx z) {
  constexpr double kRadius = 12.0;
  int n = 0;
  if (z.real() < 0.0) n = static_cast<int>(std::ceil(-z.real()));
  cplx w = z + static_cast<double>(n);
  if (std::abs(w) < kRadius) {
    const double need = std::sqrt(std::max(0.0, kRadius * kRadius - w.imag() * w.imag()));
    n += static_cast<int>(std::ceil(std::max(0.0, need - w.real())));
  }
  return n;
}

inline cplx log_gamma_asymptotic(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double kk = static_cast<double>(k);
    series += kBernoulli[k - 1] / (2.0 * kk * (2.0 * kk - 1.0)) * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

inline cplx digamma_asymptotic(cplx z) {
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx power = inv2;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    series += kBernoulli[k - 1] / (2.0 * static_cast<double>(k)) * power;
    power *= inv2;
  }
  return std::log(z) - 0.5 * inv - series;
}

}  // namespace detail

/// Principal branch of log Gamma(z).
///
/// Arguments with small real part are shifted upward with
/// log Gamma(z) = log Gamma(z + n) - sum_k log(z + k); the sum of principal
/// logarithms continues the real-axis branch without a cut crossing, so the
/// result is the principal branch also for Re z < 0.
inline cplx log_gamma(cplx z) {
  detail::check_gamma_pole(z, "log_gamma");
  const int n = detail::asymptotic_shift(z);
  cplx shift_sum = 0.0;
  for (int k = 0; k < n; ++k) shift_sum += std::log(z + static_cast<double>(k));
  const cplx r = detail::log_gamma_asymptotic(z + static_cast<double>(n)) - shift_sum;
  return detail::finite_or_throw(r, "log_gamma", z);
}

inline double log_gamma(double x) { return log_gamma(cplx(x, 0.0)).real(); }

/// Psi(z) = Gamma'(z) / Gamma(z).
inline cplx digamma(cplx z) {
  detail::check_gamma_pole(z, "digamma");
  const int n = detail::asymptotic_shift(z);
  cplx shift_sum = 0.0;
  for (int k = 0; k < n; ++k) shift_sum += 1.0 / (z + static_cast<double>(k));
  const cplx r = detail::digamma_asymptotic(z + static_cast<double>(n)) - shift_sum;
  return detail::finite_or_throw(r, "digamma", z);
}

inline double digamma(double x) { return digamma(cplx(x, 0.0)).real(); }

/// S_k(z) = sum_{n >= 0} (n + z)^{-k} for k in {2, 3}.
///
/// Sums K terms explicitly and closes the series with the Euler-Maclaurin
/// tail (integral, half term and the B_2, B_4 corrections). K is the smallest
/// count for which the next correction term is below tail_tolerance.
inline cplx polygamma_sum(int k, cplx z, const SeriesTruncation& trunc = {}) {
  if (k != 2 && k != 3) throw DomainError("polygamma_sum: order must be 2 or 3");
  if (!(trunc.tail_tolerance > 0.0) || trunc.max_terms < 1) {
    throw DomainError("polygamma_sum: invalid truncation settings");
  }
  detail::check_gamma_pole(z, "polygamma_sum");

  const double kd = static_cast<double>(k);
  // Coefficient of the first omitted Euler-Maclaurin term, |B_6|/6! * k(k+1)...(k+4).
  const double next_coef = (1.0 / 42.0) / 720.0 * kd * (kd + 1) * (kd + 2) * (kd + 3) * (kd + 4);
  const double base = std::max(10.0, std::abs(z.imag()));
  long count = std::max(0L, static_cast<long>(std::ceil(base - z.real())));
  while (2.0 * next_coef * std::pow(std::abs(z + static_cast<double>(count)), -(kd + 5.0)) >
         trunc.tail_tolerance) {
    count = count < 16 ? count + 4 : count + count / 4;
    if (count > trunc.max_terms) {
      throw ConvergenceError("polygamma_sum: max_terms insufficient for requested tolerance");
    }
  }
  if (count > trunc.max_terms) {
    throw ConvergenceError("polygamma_sum: max_terms insufficient for requested tolerance");
  }

  cplx partial = 0.0;
  // Summed from the small terms up to limit rounding accumulation.
  for (long n = count - 1; n >= 0; --n) partial += std::pow(z + static_cast<double>(n), -k);

  const cplx t = z + static_cast<double>(count);
  const cplx tail = std::pow(t, 1 - k) / (kd - 1.0) + 0.5 * std::pow(t, -k) +
                    kd / 12.0 * std::pow(t, -k - 1) -
                    kd * (kd + 1) * (kd + 2) / 720.0 * std::pow(t, -k - 3);
  return detail::finite_or_throw(partial + tail, "polygamma_sum", z);
}

inline double polygamma_sum(int k, double x, const SeriesTruncation& trunc = {}) {
  return polygamma_sum(k, cplx(x, 0.0), trunc).real();
}

/// Euclidean distance from s to the nearest integer.
inline double distance_to_integers(cplx s) {
  const double dx = s.real() - std::round(s.real());
  return std::hypot(dx, s.imag());
}

/// pi / sin(pi s), evaluated without overflow for large |Im s|.
///
/// For |Im s| >= 1 the factor e^{-pi |Im s|} is taken out analytically:
/// pi / sin(pi s) = -2 pi i e^{i pi s} / (1 - e^{2 pi i s}) for Im s > 0, and
/// the conjugate relation covers Im s < 0.
inline cplx recip_sin_pi(cplx s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw DomainError("recip_sin_pi: non-finite argument");
  }
  if (distance_to_integers(s) < kPoleThreshold) {
    throw PoleError("recip_sin_pi: argument " + detail::describe(s) +
                    " is within the pole threshold of an integer");
  }
  const double n = std::round(s.real());
  const double sign = std::fmod(std::abs(n), 2.0) == 0.0 ? 1.0 : -1.0;
  const cplx r(s.real() - n, s.imag());  // Re r in [-1/2, 1/2]

  if (std::abs(r.imag()) < 1.0) return sign * kPi / std::sin(kPi * r);

  const bool upper = r.imag() > 0.0;
  const cplx q = upper ? r : std::conj(r);
  const cplx i(0.0, 1.0);
  const cplx e1 = std::exp(i * kPi * q);  // |e1| = e^{-pi Im q} < 1
  const cplx value = -2.0 * kPi * i * e1 / (1.0 - e1 * e1);
  return sign * (upper ? value : std::conj(value));
}

}  // namespace specfun
}  // namespace loggamma
