#pragma once
// Point and row evaluation of the integral kernels: the finite-size Laplace
// kernel and its tau deformation, the limiting BBP / Tracy-Widom kernel, and
// the legacy s-variable kernel used for cross-validation.
//
// Every kernel is an inner contour integral. A row K(v, .) is evaluated by
// computing the v-dependent inner weights f_k once and then summing
// f_k / (w_k - v') for each column point v'.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loggamma/contour.hpp"
#include "loggamma/errors.hpp"
#include "loggamma/polymer.hpp"
#include "loggamma/scaling.hpp"
#include "loggamma/specfun.hpp"

namespace loggamma {

/// Panel settings shared by the kernel families.
struct KernelQuad {
  int panel_order = 16;
  double tail_tolerance = 1e-13;
  double outer_panel_length = 0.5;
  double inner_panel_length = 0.5;
  // Graded panel length at joins, as a fraction of the local geometric scale
  // (d for detours, b - a for wedge vertices).
  double outer_min_fraction = 0.5;
  double inner_min_fraction = 1.0;
};

struct FiniteKernelSpec {
  ModelSpec spec;
  double log_u = 0.0;
  double tau = 0.0;
  double a = 0.0;  // outer vertex
  double b = 0.0;  // inner vertex
  double d = 0.0;  // detour half width

  void validate() const {
    spec.validate();
    const double amax = *std::max_element(spec.a.begin(), spec.a.end());
    const double amin = *std::min_element(spec.alpha.begin(), spec.alpha.end());
    if (!(amin > b && b > a && a > amax)) {
      throw GeometryError("FiniteKernelSpec: requires min(alpha) > b > a > max(a-vector)");
    }
    if (!(d > 0.0 && d < std::min(0.25, (b - a) / 4.0))) {
      throw GeometryError("FiniteKernelSpec: requires 0 < d < min(1/4, (b - a)/4)");
    }
    if (!(tau >= 0.0)) throw DomainError("FiniteKernelSpec: tau must be nonnegative");
    if (!std::isfinite(log_u)) throw DomainError("FiniteKernelSpec: log u must be finite");
  }
};

struct ContourParams {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

namespace kernels {

using specfun::log_gamma;

/// log u(x, M, N) = W - M^{1/3} sigma x.
inline double log_u_scaled(double x, const ModelShape& shape, const ScalingConstants& sc) {
  return sc.W - std::cbrt(static_cast<double>(shape.M)) * sc.sigma * x;
}

/// mu convention of the critical scaling for a BBP layout.
inline double default_mu(const BBPLayout& layout) {
  const bool has_x = !layout.x.empty(), has_y = !layout.y.empty();
  const double mx = has_x ? *std::max_element(layout.x.begin(), layout.x.end()) : 0.0;
  const double my = has_y ? *std::min_element(layout.y.begin(), layout.y.end()) : 0.0;
  if (has_x && has_y) return 0.5 * (mx + my);
  if (!has_x && !has_y) return 0.0;
  if (!has_y) return mx + 1.0;
  return my - 1.0;
}

inline double default_rho(const BBPLayout& layout, double mu) {
  if (layout.y.empty()) return 1.0;
  const double my = *std::min_element(layout.y.begin(), layout.y.end());
  return std::min(1.0, (my - mu) / 2.0);
}

/// Outer/inner vertices a = z_c + mu s, b = a + rho s with s = sigma^{-1} M^{-1/3},
/// moved inside (max a, min alpha) when the scaled choice is inadmissible.
inline ContourParams default_contour(const ModelSpec& spec, const ModelShape& shape, const ScalingConstants& sc,
                                     const BBPLayout& layout = {}) {
  const double amax = *std::max_element(spec.a.begin(), spec.a.end());
  const double amin = *std::min_element(spec.alpha.begin(), spec.alpha.end());
  const double gap = amin - amax;
  const double s = 1.0 / (sc.sigma * std::cbrt(static_cast<double>(shape.M)));
  const double mu = default_mu(layout), rho = default_rho(layout, mu);
  ContourParams cp;
  cp.a = sc.z_c + mu * s;
  cp.b = cp.a + rho * s;
  if (!(cp.a > amax + 0.02 * gap && cp.b < amin - 0.02 * gap)) {
    cp.a = amax + 0.35 * gap;
    cp.b = amax + 0.65 * gap;
  }
  cp.d = std::min(0.125, (cp.b - cp.a) / 8.0);
  return cp;
}

/// Contour parameters for a plain spec with no scaling information.
inline ContourParams default_contour(const ModelSpec& spec) {
  const double amax = *std::max_element(spec.a.begin(), spec.a.end());
  const double amin = *std::min_element(spec.alpha.begin(), spec.alpha.end());
  const double gap = amin - amax;
  ContourParams cp{amax + 0.35 * gap, amax + 0.65 * gap, 0.0};
  cp.d = std::min(0.125, (cp.b - cp.a) / 8.0);
  return cp;
}

// Parameters grouped by value: (value, multiplicity).
inline std::vector<std::pair<double, double>> group_values(const std::vector<double>& v) {
  std::map<double, double> m;
  for (double x : v) m[x] += 1.0;
  return {m.begin(), m.end()};
}

/// Finite-size kernel K_u (tau = 0) or its tau deformation.
class FiniteKernel {
 public:
  static constexpr double kSpurHalfHeight = 0.25;

  FiniteKernel(FiniteKernelSpec ks, KernelQuad q = {}) : ks_(std::move(ks)), q_(q) {
    ks_.validate();
    a_groups_ = group_values(ks_.spec.a);
    alpha_groups_ = group_values(ks_.spec.alpha);
  }

  const FiniteKernelSpec& spec() const { return ks_; }

  /// Phi(z) = sum log Gamma(z - a_n) - sum log Gamma(alpha_m - z) - z log u - tau z^2 / 2,
  /// so the integrand is exp(Phi(v) - Phi(w)) pi / sin(pi (v - w)) / (w - v').
  cplx phi(cplx z) const {
    cplx s = 0.0;
    for (const auto& [x, m] : a_groups_) s += m * log_gamma(z - x);
    for (const auto& [x, m] : alpha_groups_) s -= m * log_gamma(x - z);
    return s - z * ks_.log_u - 0.5 * ks_.tau * z * z;
  }

  Contour outer_contour() const { return contour::build_ray_contour(ks_.a, 3.0 * specfun::kPi / 4.0); }

  /// The detour contour D_v(b, pi/4, d) itself.
  Contour inner_contour(cplx v) const {
    return contour::build_detour_contour(v, ks_.b, specfun::kPi / 4.0, ks_.d);
  }

  /// Contour actually used for row v, plus the number m of poles v + n
  /// (n = 1..m) whose residues are subtracted. D_v runs between consecutive
  /// poles v + n all the way back to v + 2d, so its two long sides nearly
  /// cancel; by Cauchy the same integral is C_b (or a spur of width 1/2 to
  /// v + m + 1/2) minus those residues.
  Contour evaluation_contour(cplx v, int& m) const {
    const double delta = contour::wedge_point(ks_.b, specfun::kPi / 4.0, v.imag()).real() - v.real();
    m = delta < 0.75 ? -1 : static_cast<int>(std::floor(delta - 0.75));
    if (m < 0) return contour::build_ray_contour(ks_.b, specfun::kPi / 4.0);
    return contour::build_spur_contour(ks_.b, specfun::kPi / 4.0, v.real() + m + 0.5, v.imag(), kSpurHalfHeight);
  }

  QuadratureGrid outer_grid(int order) const {
    DiscretizeOptions o = base_options(order);
    o.panel_length = q_.outer_panel_length;
    o.min_panel = std::min(q_.outer_panel_length, q_.outer_min_fraction * (ks_.b - ks_.a));
    o.log_envelope = [this](cplx v) { return row_log_mass(v); };
    o.log_reference = 0.0;
    return contour::discretize(outer_contour(), o);
  }

  QuadratureGrid inner_grid(cplx v, int order) const {
    int m = 0;
    return discretize_inner(evaluation_contour(v, m), v, order, q_.inner_min_fraction * (ks_.b - ks_.a));
  }

  /// Inner weights f_k and nodes w_k for row v, residue terms included.
  void row_weights(cplx v, int order, std::vector<cplx>& w, std::vector<cplx>& f) const {
    int m = 0;
    const QuadratureGrid g =
        discretize_inner(evaluation_contour(v, m), v, order, q_.inner_min_fraction * (ks_.b - ks_.a));
    const cplx pv = phi(v);
    w = g.nodes;
    f.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      f[k] = g.weights[k] * std::exp(pv - phi(w[k])) * specfun::recip_sin_pi(v - w[k]);
    }
    // Residue of pi / sin(pi (v - w)) at w = v + n is (-1)^{n+1}.
    for (int n = 1; n <= m; ++n) {
      w.push_back(v + static_cast<double>(n));
      f.push_back((n % 2 == 0 ? 1.0 : -1.0) * std::exp(pv - phi(v + static_cast<double>(n))));
    }
  }

  /// Row weights from a direct discretization of D_v; accurate only while
  /// v stays near the vertex, where D_v has no long sides.
  void row_weights_detour(cplx v, int order, std::vector<cplx>& w, std::vector<cplx>& f) const {
    const QuadratureGrid g = discretize_inner(inner_contour(v), v, order, ks_.d);
    const cplx pv = phi(v);
    w = g.nodes;
    f.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      f[k] = g.weights[k] * std::exp(pv - phi(w[k])) * specfun::recip_sin_pi(v - w[k]);
    }
  }

  cplx eval(cplx v, cplx vp, int order = 0) const {
    std::vector<cplx> w, f;
    row_weights(v, order > 0 ? order : q_.panel_order, w, f);
    cplx s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += f[k] / (w[k] - vp);
    return s;
  }

  /// log sum |f_k| at a coarse order: bounds |K(v, v')| times the distance
  /// from v' to the inner contour.
  double row_log_mass(cplx v) const {
    return safe_real([&] {
      std::vector<cplx> w, f;
      row_weights(v, 8, w, f);
      double m = 0.0;
      for (const auto& x : f) m += std::abs(x);
      return std::log(m);
    });
  }

  /// Same kernel with every gamma ratio and the u power evaluated as separate
  /// factors instead of one combined exponent.
  cplx eval_direct(cplx v, cplx vp, int order = 0) const {
    int m = 0;
    const Contour c = evaluation_contour(v, m);
    const QuadratureGrid g =
        discretize_inner(c, v, order > 0 ? order : q_.panel_order, q_.inner_min_fraction * (ks_.b - ks_.a));
    auto ratio = [&](cplx w) {
      cplx prod = 1.0;
      for (double an : ks_.spec.a) prod *= std::exp(log_gamma(v - an)) / std::exp(log_gamma(w - an));
      for (double am : ks_.spec.alpha) prod *= std::exp(log_gamma(am - w)) / std::exp(log_gamma(am - v));
      return prod * std::exp((w - v) * ks_.log_u) * std::exp(0.5 * ks_.tau * (w * w - v * v));
    };
    cplx s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const cplx w = g.nodes[k];
      s += g.weights[k] * specfun::recip_sin_pi(v - w) * ratio(w) / (w - vp);
    }
    for (int n = 1; n <= m; ++n) {
      const cplx w = v + static_cast<double>(n);
      s -= (n % 2 == 0 ? -1.0 : 1.0) * ratio(w) / (w - vp);
    }
    return s;
  }

 private:
  DiscretizeOptions base_options(int order) const {
    DiscretizeOptions o;
    o.panel_order = order;
    o.tail_tolerance = q_.tail_tolerance;
    o.max_radius = 400.0;
    return o;
  }

  QuadratureGrid discretize_inner(const Contour& c, cplx v, int order, double min_panel) const {
    DiscretizeOptions o = base_options(order);
    o.panel_length = q_.inner_panel_length;
    o.min_panel = std::min({q_.inner_panel_length, min_panel, 0.125});
    o.log_envelope = [this, v](cplx w) {
      return safe_real([&] { return -phi(w).real() + std::log(std::abs(specfun::recip_sin_pi(v - w))); });
    };
    return contour::discretize(c, o);
  }

  template <class Fn>
  static double safe_real(Fn&& fn) {
    try {
      return fn();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  FiniteKernelSpec ks_;
  KernelQuad q_;
  std::vector<std::pair<double, double>> a_groups_, alpha_groups_;
};

inline cplx finite_kernel(cplx v, cplx vp, const FiniteKernelSpec& ks, const KernelQuad& q = {}) {
  return FiniteKernel(ks, q).eval(v, vp);
}

enum class LimitForm { Wedge, Dtilde };

struct LimitKernelSpec {
  std::vector<double> x_vec;
  std::vector<double> y_vec;
  double r_param = 0.0;
  double mu = 0.0;
  double rho = 1.0;
  double a = 0.0;
  double b = 1.0;
  LimitForm form = LimitForm::Wedge;

  double max_x() const { return x_vec.empty() ? -INFINITY : *std::max_element(x_vec.begin(), x_vec.end()); }
  double min_y() const { return y_vec.empty() ? INFINITY : *std::min_element(y_vec.begin(), y_vec.end()); }

  void validate() const {
    if (!(min_y() > max_x())) throw DomainError("LimitKernelSpec: requires min(y) > max(x)");
    if (form == LimitForm::Wedge) {
      if (!(min_y() > b && b > a && a > max_x())) {
        throw GeometryError("LimitKernelSpec: requires min(y) > b > a > max(x)");
      }
    } else {
      if (!(rho > 0.0)) throw GeometryError("LimitKernelSpec: rho must be positive");
      if (!(min_y() > mu + rho && mu > max_x())) {
        throw GeometryError("LimitKernelSpec: requires min(y) > mu + rho and mu > max(x)");
      }
    }
  }

  /// Definition defaults: mu, rho from the layout; wedge anchors a = mu,
  /// b = mu + rho.
  static LimitKernelSpec defaults(const std::vector<double>& x, const std::vector<double>& y, double r,
                                  LimitForm form = LimitForm::Wedge) {
    LimitKernelSpec s;
    s.x_vec = x;
    s.y_vec = y;
    s.r_param = r;
    BBPLayout layout{x, y};
    s.mu = default_mu(layout);
    s.rho = default_rho(layout, s.mu);
    s.a = s.mu;
    s.b = s.mu + s.rho;
    s.form = form;
    return s;
  }
};

/// Limiting kernel with integrand
/// prod (w - x_n)/(v - x_n) prod (y_m - v)/(y_m - w) exp(-v^3/3 + w^3/3 - r w + r v) / ((v - w)(w - v')).
class LimitKernel {
 public:
  LimitKernel(LimitKernelSpec ks, KernelQuad q = limit_defaults()) : ks_(std::move(ks)), q_(q) { ks_.validate(); }

  static KernelQuad limit_defaults() {
    KernelQuad q;
    q.outer_panel_length = 1.0;
    q.inner_panel_length = 1.0;
    q.outer_min_fraction = 0.5;
    q.inner_min_fraction = 0.5;
    q.tail_tolerance = 1e-15;
    return q;
  }

  const LimitKernelSpec& spec() const { return ks_; }

  /// psi(z) = z^3/3 - r z + sum log(z - x_n) - sum log(y_m - z).
  cplx psi(cplx z) const {
    cplx s = z * z * z / 3.0 - ks_.r_param * z;
    for (double x : ks_.x_vec) s += std::log(z - x);
    for (double y : ks_.y_vec) s -= std::log(y - z);
    return s;
  }

  double scale() const { return ks_.form == LimitForm::Wedge ? ks_.b - ks_.a : ks_.rho; }

  Contour outer_contour() const {
    return contour::build_ray_contour(ks_.form == LimitForm::Wedge ? ks_.a : ks_.mu, 3.0 * specfun::kPi / 4.0);
  }
  Contour inner_contour() const {
    if (ks_.form == LimitForm::Wedge) return contour::build_ray_contour(ks_.b, specfun::kPi / 4.0);
    return contour::build_limit_contour(ks_.mu, ks_.rho);
  }

  QuadratureGrid outer_grid(int order) const {
    DiscretizeOptions o = base_options(order, q_.outer_panel_length, q_.outer_min_fraction);
    o.log_envelope = [this](cplx v) { return -psi(v).real(); };
    return contour::discretize(outer_contour(), o);
  }

  QuadratureGrid inner_grid(int order) const {
    DiscretizeOptions o = base_options(order, q_.inner_panel_length, q_.inner_min_fraction);
    o.log_envelope = [this](cplx w) { return psi(w).real(); };
    return contour::discretize(inner_contour(), o);
  }

  /// Inner weights for row v against a fixed inner grid.
  void row_weights(cplx v, const QuadratureGrid& inner, std::vector<cplx>& f) const {
    const cplx pv = psi(v);
    f.resize(inner.size());
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const cplx w = inner.nodes[k];
      f[k] = inner.weights[k] * std::exp(psi(w) - pv) / (v - w);
    }
  }

  cplx eval(cplx v, cplx vp, int order = 0) const {
    const QuadratureGrid g = inner_grid(order > 0 ? order : q_.panel_order);
    std::vector<cplx> f;
    row_weights(v, g, f);
    cplx s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) s += f[k] / (g.nodes[k] - vp);
    return s;
  }

 private:
  DiscretizeOptions base_options(int order, double panel_length, double min_fraction) const {
    DiscretizeOptions o;
    o.panel_order = order;
    o.tail_tolerance = q_.tail_tolerance;
    o.panel_length = panel_length;
    o.min_panel = std::min(panel_length, min_fraction * scale());
    o.max_radius = 100.0;
    return o;
  }

  LimitKernelSpec ks_;
  KernelQuad q_;
};

inline cplx limit_kernel(cplx v, cplx vp, const LimitKernelSpec& ks, const KernelQuad& q = LimitKernel::limit_defaults()) {
  return LimitKernel(ks, q).eval(v, vp);
}

/// Kernel of the older formula in the s = w - v variable, valid when
/// min(alpha) - max(a) > 1 and tau > 0.
class LegacyKernel {
 public:
  LegacyKernel(ModelSpec spec, double log_u, double tau, KernelQuad q = {}) : spec_(std::move(spec)), log_u_(log_u), tau_(tau), q_(q) {
    spec_.validate();
    amax_ = *std::max_element(spec_.a.begin(), spec_.a.end());
    amin_ = *std::min_element(spec_.alpha.begin(), spec_.alpha.end());
    if (!(amin_ - amax_ > 1.0)) throw DomainError("legacy kernel: requires min(alpha) - max(a) > 1");
    if (!(tau_ >= 0.0)) throw DomainError("legacy kernel: tau must be nonnegative");
    mu_ = 0.5 * amax_ + 0.5 * amin_;
    eta_ = 0.25 * amax_ + 0.75 * amin_;
    a_groups_ = group_values(spec_.a);
    alpha_groups_ = group_values(spec_.alpha);
  }

  static constexpr double kPhi = specfun::kPi / 6.0;
  static constexpr double kD = 0.25;

  double mu() const { return mu_; }
  double eta() const { return eta_; }

  /// L(z) = sum log Gamma(z - a_n) - sum log Gamma(alpha_m - z).
  cplx lg(cplx z) const {
    cplx s = 0.0;
    for (const auto& [x, m] : a_groups_) s += m * log_gamma(z - x);
    for (const auto& [x, m] : alpha_groups_) s -= m * log_gamma(x - z);
    return s;
  }

  /// Log of the s-integrand without the sine factor and the 1/(v + s - v') pole.
  cplx log_factor(cplx v, cplx s) const {
    return lg(v) - lg(v + s) + s * log_u_ + tau_ * (v * s + 0.5 * s * s);
  }

  Contour outer_contour() const { return contour::build_legacy_outer(mu_, kPhi); }
  Contour inner_contour(cplx v) const { return contour::build_legacy_inner(eta_ - v.real(), kD); }

  /// As for the finite kernel: the line Re s = R with a spur to m + 1/2 and
  /// the residues at s = 1..m subtracted.
  Contour evaluation_contour(cplx v, int& m) const {
    const double R = eta_ - v.real();
    m = R < 0.75 ? -1 : static_cast<int>(std::floor(R - 0.75));
    if (m < 0) return contour::build_vertical_line(R);
    return contour::build_legacy_inner(R, kD, m + 0.5);
  }

  QuadratureGrid outer_grid(int order) const {
    DiscretizeOptions o = base_options(order, q_.outer_panel_length);
    o.min_panel = std::min(q_.outer_panel_length, 0.25);
    o.log_envelope = [this](cplx v) {
      try {
        std::vector<cplx> w, f;
        row_weights(v, 8, w, f);
        double m = 0.0;
        for (const auto& x : f) m += std::abs(x);
        return std::log(m);
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    o.log_reference = 0.0;
    return contour::discretize(outer_contour(), o);
  }

  QuadratureGrid inner_grid(cplx v, int order) const {
    int m = 0;
    return discretize_inner(evaluation_contour(v, m), v, order);
  }

  /// Row weights in terms of w = v + s so rows share the evaluation used by
  /// the finite kernel: K(v, v') = sum f_k / (w_k - v').
  void row_weights(cplx v, int order, std::vector<cplx>& w, std::vector<cplx>& f) const {
    int m = 0;
    const QuadratureGrid g = discretize_inner(evaluation_contour(v, m), v, order);
    w.resize(g.size());
    f.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const cplx s = g.nodes[k];
      // Gamma(-s) Gamma(1 + s) = -pi / sin(pi s).
      f[k] = g.weights[k] * (-specfun::recip_sin_pi(s)) * std::exp(log_factor(v, s));
      w[k] = v + s;
    }
    // Residue of -pi / sin(pi s) at s = n is (-1)^{n+1}.
    for (int n = 1; n <= m; ++n) {
      w.push_back(v + static_cast<double>(n));
      f.push_back((n % 2 == 0 ? 1.0 : -1.0) * std::exp(log_factor(v, static_cast<double>(n))));
    }
  }

  cplx eval(cplx v, cplx vp, int order = 0) const {
    std::vector<cplx> w, f;
    row_weights(v, order > 0 ? order : q_.panel_order, w, f);
    cplx s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += f[k] / (w[k] - vp);
    return s;
  }

 private:
  DiscretizeOptions base_options(int order, double panel_length) const {
    DiscretizeOptions o;
    o.panel_order = order;
    o.tail_tolerance = q_.tail_tolerance;
    o.panel_length = panel_length;
    o.max_radius = 400.0;
    return o;
  }

  QuadratureGrid discretize_inner(const Contour& c, cplx v, int order) const {
    DiscretizeOptions o = base_options(order, q_.inner_panel_length);
    o.min_panel = std::min(q_.inner_panel_length, 0.125);
    o.log_envelope = [this, v](cplx s) {
      try {
        return log_factor(v, s).real() + std::log(std::abs(specfun::recip_sin_pi(s)));
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    return contour::discretize(c, o);
  }

  ModelSpec spec_;
  double log_u_, tau_;
  KernelQuad q_;
  double amax_ = 0, amin_ = 0, mu_ = 0, eta_ = 0;
  std::vector<std::pair<double, double>> a_groups_, alpha_groups_;
};

inline cplx legacy_kernel(cplx v, cplx vp, const ModelSpec& spec, double log_u, double tau, const KernelQuad& q = {}) {
  return LegacyKernel(spec, log_u, tau, q).eval(v, vp);
}

}  // namespace kernels
}  // namespace loggamma
