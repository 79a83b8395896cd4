#pragma once
// Small statistics toolkit for the experiments: Kolmogorov-Smirnov
// distances, Wilson intervals, linear least squares and a monotone
// interpolant for tabulated distribution functions.

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "loggamma/errors.hpp"

namespace loggamma::stats {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw DomainError("mean: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw DomainError("variance: need at least two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

/// sup |F_n - F| for a continuous reference CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

/// Two-sample KS distance.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// P(D_n > d) from the Kolmogorov series with Stephens' finite-n correction.
inline double ks_pvalue(double d, std::size_t n) {
  if (n == 0) throw DomainError("ks_pvalue: n must be positive");
  const double rn = std::sqrt(static_cast<double>(n));
  const double lam = (rn + 0.12 + 0.11 / rn) * d;
  if (lam < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::exp(-2.0 * k * k * lam * lam);
    s += (k % 2 ? 2.0 : -2.0) * t;
    if (t < 1e-17) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

/// Upper standard normal quantile z with P(Z > z) = tail.
inline double normal_upper_quantile(double tail) {
  if (!(tail > 0.0 && tail < 1.0)) throw DomainError("normal_upper_quantile: tail must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), tail));
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for k successes in n trials at two-sided level conf.
inline Interval wilson_interval(long k, long n, double conf = 0.99) {
  if (n <= 0 || k < 0 || k > n) throw DomainError("wilson_interval: invalid counts");
  const double z = normal_upper_quantile(0.5 * (1.0 - conf));
  const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn;
  const double den = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / den;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("linear_fit: need matching vectors of length >= 2");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

/// Weighted least squares; r2 is the weighted coefficient of determination.
inline LinearFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                                     const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2) {
    throw DomainError("weighted_linear_fit: need matching vectors of length >= 2");
  }
  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("weighted_linear_fit: weights must be positive");
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("weighted_linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

/// Piecewise-linear CDF through tabulated points, made nondecreasing by a
/// running maximum and clamped to [0, 1] outside the grid.
class TabulatedCdf {
 public:
  TabulatedCdf() = default;
  TabulatedCdf(std::vector<double> x, std::vector<double> F) : x_(std::move(x)), F_(std::move(F)) {
    if (x_.size() != F_.size() || x_.size() < 2) throw DomainError("TabulatedCdf: need at least two points");
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) throw DomainError("TabulatedCdf: grid must be increasing");
    }
    for (auto& v : F_) v = std::clamp(v, 0.0, 1.0);
    for (std::size_t i = 1; i < F_.size(); ++i) F_[i] = std::max(F_[i], F_[i - 1]);
  }

  double operator()(double t) const {
    if (t <= x_.front()) return t < x_.front() ? 0.0 : F_.front();
    if (t >= x_.back()) return t > x_.back() ? 1.0 : F_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - x_.begin());
    const double w = (t - x_[j - 1]) / (x_[j] - x_[j - 1]);
    return (1.0 - w) * F_[j - 1] + w * F_[j];
  }

  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& values() const { return F_; }

 private:
  std::vector<double> x_, F_;
};

/// Mean of a distribution from its CDF on a uniform grid via central
/// differences of the density, sum x f(x) dx.
inline double mean_from_cdf(const std::vector<double>& x, const std::vector<double>& F) {
  if (x.size() != F.size() || x.size() < 3) throw DomainError("mean_from_cdf: need at least three points");
  double m = 0.0, mass = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double dens = (F[i + 1] - F[i - 1]) / (x[i + 1] - x[i - 1]);
    const double dx = 0.5 * (x[i + 1] - x[i - 1]);
    m += x[i] * dens * dx;
    mass += dens * dx;
  }
  return m / mass;
}

}  // namespace loggamma::stats
