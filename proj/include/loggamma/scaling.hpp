#pragma once
// Critical point, law-of-large-numbers profile, fluctuation scale and the
// steepest-descent function G_{M,N}, plus numerical checks of its sign and
// monotonicity properties.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "loggamma/errors.hpp"
#include "loggamma/specfun.hpp"

namespace loggamma {

/// Polymer shape: M columns, N rows, bulk parameter theta.
struct ModelShape {
  long M = 1;
  long N = 1;
  double theta = 1.0;

  double p() const { return static_cast<double>(N) / static_cast<double>(M); }
  double alpha_ratio() const { return p(); }

  void validate() const {
    if (M < 1 || N < 1) throw DomainError("ModelShape: M and N must be positive");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("ModelShape: theta must be positive");
  }
};

struct ScalingConstants {
  double z_c = 0.0;
  double sigma = 0.0;
  double W = 0.0;
  double C = 0.0;
  double h = 0.0;
};

namespace scaling {

using specfun::digamma;
using specfun::log_gamma;
using specfun::polygamma_sum;

inline double S2(double z) { return polygamma_sum(2, z); }
inline double S3(double z) { return polygamma_sum(3, z); }

inline double g_eval(double z, double theta) {
  if (!(theta > 0.0)) throw DomainError("g_eval: theta must be positive");
  if (!(z > 0.0 && z < theta)) throw DomainError("g_eval: z must lie in (0, theta)");
  return S2(theta - z) / S2(z);
}

inline double g_derivative(double z, double theta) {
  const double a = S2(theta - z), b = S2(z);
  return 2.0 * (S3(theta - z) * b + a * S3(z)) / (b * b);
}

/// Inverse of g on (0, theta): bisection bracket refined by safeguarded Newton.
inline double g_inverse(double x, double theta) {
  if (!(theta > 0.0)) throw DomainError("g_inverse: theta must be positive");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("g_inverse: x must be positive");
  double lo = 1e-6 * theta, hi = theta - 1e-6 * theta;
  for (int k = 0; k < 40 && g_eval(lo, theta) > x; ++k) lo *= 1e-2;
  for (int k = 0; k < 40 && g_eval(hi, theta) < x; ++k) hi = theta - (theta - hi) * 1e-2;
  if (g_eval(lo, theta) > x || g_eval(hi, theta) < x) {
    throw ConvergenceError("g_inverse: failed to bracket the root");
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double gz = g_eval(z, theta);
    const double res = gz - x;
    if (std::abs(res) <= 2e-15 * x) return z;
    if (res > 0.0) hi = z; else lo = z;
    double next = z - res / g_derivative(z, theta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    z = next;
  }
  throw ConvergenceError("g_inverse: iteration limit reached");
}

/// h_theta(x) = x Psi(g^{-1}(x)) + Psi(theta - g^{-1}(x)); h(0+) = Psi(theta).
inline double h_theta(double x, double theta) {
  if (x == 0.0) return digamma(theta);
  const double z = g_inverse(x, theta);
  return x * digamma(z) + digamma(theta - z);
}

inline double critical_theta(double p, double theta) { return g_inverse(p, theta); }

inline ScalingConstants scaling_constants(const ModelShape& shape) {
  shape.validate();
  const double M = static_cast<double>(shape.M), N = static_cast<double>(shape.N);
  const double th = shape.theta, p = shape.p();
  ScalingConstants sc;
  sc.z_c = g_inverse(p, th);
  sc.sigma = std::cbrt(p * S3(sc.z_c) + S3(th - sc.z_c));
  sc.W = N * digamma(sc.z_c) + M * digamma(th - sc.z_c);
  sc.C = N * log_gamma(sc.z_c) - M * log_gamma(th - sc.z_c) - sc.W * sc.z_c;
  sc.h = h_theta(p, th);
  return sc;
}

/// G_{M,N}(z) = N log Gamma(z) - M log Gamma(theta - z) - W z - C.
inline cplx eval_G(cplx z, const ModelShape& shape, const ScalingConstants& sc) {
  const double M = static_cast<double>(shape.M), N = static_cast<double>(shape.N);
  return N * log_gamma(z) - M * log_gamma(shape.theta - z) - sc.W * z - sc.C;
}

inline cplx eval_G(cplx z, const ModelShape& shape) { return eval_G(z, shape, scaling_constants(shape)); }

/// G_alpha = G_{M,N} / M.
inline cplx eval_G_alpha(cplx z, const ModelShape& shape, const ScalingConstants& sc) {
  return eval_G(z, shape, sc) / static_cast<double>(shape.M);
}

/// G'(z) = N Psi(z) + M Psi(theta - z) - W.
inline cplx eval_G_prime(cplx z, const ModelShape& shape, const ScalingConstants& sc) {
  const double M = static_cast<double>(shape.M), N = static_cast<double>(shape.N);
  return N * digamma(z) + M * digamma(shape.theta - z) - sc.W;
}

struct DescentReport {
  long checks = 0;
  long violations = 0;
  double worst = 0.0;       // largest violation magnitude beyond tolerance
  double tolerance = 0.0;
  std::vector<std::string> notes;
};

/// Sign and monotonicity checks of Re G along the four diagonal rays through
/// z_c, along the vertical line through z_c, and on the region
/// {Re(z - z_c) > 0, |Im(z - z_c)| >= Re(z - z_c)}.
inline DescentReport descent_checks(const ModelShape& shape, int grid_size, double max_radius = 8.0) {
  if (grid_size < 10) throw DomainError("descent_checks: grid_size must be at least 10");
  shape.validate();
  const ScalingConstants sc = scaling_constants(shape);
  DescentReport rep;
  rep.tolerance = 1e-12 * static_cast<double>(shape.M + shape.N);
  const cplx zc(sc.z_c, 0.0);

  auto record = [&](double excess, const std::string& where) {
    ++rep.checks;
    if (excess > rep.tolerance) {
      ++rep.violations;
      if (excess > rep.worst) rep.worst = excess;
      if (rep.notes.size() < 20) rep.notes.push_back(where);
    }
  };

  const double pi = specfun::kPi;
  const double angles[4] = {pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4};
  for (double phi : angles) {
    const cplx dir = std::polar(1.0, phi);
    const bool increasing = std::cos(phi) > 0.0;
    double prev = 0.0;  // Re G(z_c) = 0
    for (int k = 1; k <= grid_size; ++k) {
      const double r = max_radius * static_cast<double>(k) / grid_size;
      const cplx z = zc + r * dir;
      const double slope = (dir * eval_G_prime(z, shape, sc)).real();
      const double val = eval_G(z, shape, sc).real();
      const double tol_scale = 1.0 + std::abs(val);
      if (increasing) {
        record(-slope, "ray slope phi=" + std::to_string(phi) + " r=" + std::to_string(r));
        record((prev - val) / tol_scale, "ray value phi=" + std::to_string(phi) + " r=" + std::to_string(r));
      } else {
        record(slope, "ray slope phi=" + std::to_string(phi) + " r=" + std::to_string(r));
        record((val - prev) / tol_scale, "ray value phi=" + std::to_string(phi) + " r=" + std::to_string(r));
      }
      prev = val;
    }
  }

  for (int k = -grid_size; k <= grid_size; ++k) {
    if (k == 0) continue;
    const double r = max_radius * static_cast<double>(k) / grid_size;
    const cplx z = zc + cplx(0.0, r);
    const double slope = (cplx(0.0, 1.0) * eval_G_prime(z, shape, sc)).real();
    record(r > 0 ? -slope : slope, "vertical r=" + std::to_string(r));
  }

  for (int i = 1; i <= grid_size; ++i) {
    const double x = max_radius * 0.5 * static_cast<double>(i) / grid_size;
    for (int j = 0; j <= grid_size; ++j) {
      const double y = x + max_radius * static_cast<double>(j) / grid_size;
      for (double s : {1.0, -1.0}) {
        const double val = eval_G(zc + cplx(x, s * y), shape, sc).real();
        record(-val / (1.0 + std::abs(val)), "region x=" + std::to_string(x) + " y=" + std::to_string(s * y));
      }
    }
  }
  return rep;
}

struct LlnResult {
  double value = 0.0;
  double maximizer = 0.0;
  bool interior = false;
};

/// max over x in [0, p) of -x Psi(alpha1) - h_theta(p - x), by golden section.
inline LlnResult lln_perturbed(double p, double alpha1, double theta) {
  if (!(p > 0.0) || !(alpha1 > 0.0) || !(theta > 0.0)) {
    throw DomainError("lln_perturbed: p, alpha1 and theta must be positive");
  }
  const double psi_a = digamma(alpha1);
  auto f = [&](double x) { return -x * psi_a - h_theta(p - x, theta); };
  // f'(0) = Psi(theta_c) - Psi(alpha1); f is concave.
  if (alpha1 >= critical_theta(p, theta)) return {f(0.0), 0.0, false};

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = p * (1.0 - 1e-12);
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + invphi * (hi - lo); f2 = f(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - invphi * (hi - lo); f1 = f(x1);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {f(x), x, x > 0.0};
}

}  // namespace scaling
}  // namespace loggamma
