#pragma once
// Gauss-Legendre rules on [-1, 1], computed once per order and cached.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "loggamma/errors.hpp"

namespace loggamma::quad {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached n-point Gauss-Legendre rule; thread safe.
inline const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 512) throw DomainError("gauss_legendre: order out of range");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<GaussRule>(detail::compute_gauss_legendre(n))).first;
  }
  return *it->second;
}

/// Composite Gauss-Legendre integral of a real function on [lo, hi].
template <class F>
double integrate(F&& f, double lo, double hi, int panels, int order = 20) {
  const auto& rule = gauss_legendre(order);
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = lo + (p + 0.5) * h;
    for (int k = 0; k < order; ++k) sum += rule.weights[k] * f(c + 0.5 * h * rule.nodes[k]);
  }
  return 0.5 * h * sum;
}

}  // namespace loggamma::quad
