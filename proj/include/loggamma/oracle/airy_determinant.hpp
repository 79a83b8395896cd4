#pragma once
// Independent Tracy-Widom GUE oracle: F2(s) = det(I - K_Airy) on L^2(s, inf),
// with Ai computed from its steepest-descent contour integral and the
// determinant from a Gauss-Legendre Nystrom discretization of a truncated
// interval. Shares only the Gauss rule with the rest of the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "loggamma/errors.hpp"
#include "loggamma/quadrature.hpp"

namespace loggamma::oracle {

struct AiryPair {
  double ai = 0.0;
  double aip = 0.0;
};

/// Ai(x) and Ai'(x) from Ai(x) = Im(I) / pi with
/// I = int_0^inf exp(t^3/3 - x t) e^{i pi/3} ds, t = c + s e^{i pi/3}, c = sqrt(max(x, 0)).
inline AiryPair airy(double x) {
  using C = std::complex<double>;
  const double c = std::sqrt(std::max(x, 0.0));
  const C e = std::polar(1.0, M_PI / 3.0);
  // Re of the exponent is -2c^3/3 - c s^2/2 - s^3/3 + (x < 0 ? -x s / 2 : 0); stop
  // where it has dropped 50 below its peak.
  const double xneg = std::max(-x, 0.0);
  double S = 4.0;
  auto drop = [&](double s) { return c * s * s / 2.0 + s * s * s / 3.0 - xneg * s / 2.0; };
  const double peak_drop = xneg > 0 ? -drop(std::sqrt(xneg / 2.0)) : 0.0;
  while (drop(S) + peak_drop < 50.0) S += 1.0;
  const int panels = static_cast<int>(std::ceil(S / 0.5));
  const auto& rule = quad::gauss_legendre(24);
  C I0 = 0.0, I1 = 0.0;
  const double h = S / panels;
  const C base = -2.0 * c * c * c / 3.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * h;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double s = lo + 0.5 * h * (rule.nodes[k] + 1.0);
      const double wt = 0.5 * h * rule.weights[k];
      const C t = c + s * e;
      // Subtract the value at s = 0 and restore it below to keep exp in range.
      const C ex = std::exp(t * t * t / 3.0 - x * t - (c * c * c / 3.0 - x * c)) * e * wt;
      I0 += ex;
      I1 += -t * ex;
    }
  }
  const double scale = std::exp(base.real());
  return {scale * I0.imag() / M_PI, scale * I1.imag() / M_PI};
}

/// Airy kernel with its diagonal limit Ai'(x)^2 - x Ai(x)^2.
inline double airy_kernel(double x, const AiryPair& ax, double y, const AiryPair& ay) {
  if (x == y) return ax.aip * ax.aip - x * ax.ai * ax.ai;
  return (ax.ai * ay.aip - ax.aip * ay.ai) / (x - y);
}

struct OracleOptions {
  int nodes = 100;
  double cutoff = 14.0;  // upper limit max(s, 0) + cutoff
};

/// F2(s) = det(I - K_Airy) restricted to (s, inf).
inline double tracy_widom_gue(double s, const OracleOptions& opt = {}) {
  const double hi = std::max(s, 0.0) + opt.cutoff;
  const auto& rule = quad::gauss_legendre(opt.nodes);
  const int n = opt.nodes;
  std::vector<double> x(n), sw(n);
  std::vector<AiryPair> A(n);
  for (int k = 0; k < n; ++k) {
    x[k] = s + 0.5 * (hi - s) * (rule.nodes[k] + 1.0);
    sw[k] = std::sqrt(0.5 * (hi - s) * rule.weights[k]);
    A[k] = airy(x[k]);
  }
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      B(i, j) = (i == j ? 1.0 : 0.0) - sw[i] * airy_kernel(x[i], A[i], x[j], A[j]) * sw[j];
    }
  }
  const double d = Eigen::PartialPivLU<Eigen::MatrixXd>(B).determinant();
  if (!std::isfinite(d)) throw NumericError("tracy_widom_gue: non-finite determinant");
  return d;
}

/// Mean of the GUE Tracy-Widom law by parts on [lo, hi]: hi - int_lo^hi F,
/// using F(lo) = 0 and F(hi) = 1 to double precision.
inline double tracy_widom_mean(double lo = -10.0, double hi = 8.0, int panels = 18, const OracleOptions& opt = {}) {
  const auto& rule = quad::gauss_legendre(16);
  const double h = (hi - lo) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = lo + p * h + 0.5 * h * (rule.nodes[k] + 1.0);
      acc += 0.5 * h * rule.weights[k] * tracy_widom_gue(t, opt);
    }
  }
  return hi - acc;
}

}  // namespace loggamma::oracle
