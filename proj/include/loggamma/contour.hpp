#pragma once
// Piecewise-linear contours (finite segments and semi-infinite rays),
// their constructors, and composite Gauss-Legendre discretization.
//
// All contours are oriented with increasing imaginary part. A Ray either
// arrives from infinity at its anchor (incoming) or leaves the anchor
// towards infinity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "loggamma/errors.hpp"
#include "loggamma/quadrature.hpp"
#include "loggamma/specfun.hpp"

namespace loggamma {

struct Segment {
  cplx start;
  cplx end;
};

struct Ray {
  cplx anchor;
  cplx direction;  // unit vector pointing away from the anchor
  bool incoming = false;
};

using Piece = std::variant<Segment, Ray>;

struct Contour {
  std::vector<Piece> pieces;
};

/// Nodes and weights of a discretized contour; weights carry dz / (2 pi i).
struct QuadratureGrid {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  double truncation_radius = 0.0;
  int panel_order = 0;
  double tail_estimate = 0.0;  // envelope at the truncation point relative to its maximum

  std::size_t size() const { return nodes.size(); }
};

struct DiscretizeOptions {
  int panel_order = 16;
  double tail_tolerance = 1e-10;
  double decay_rate_hint = 1.0;
  double panel_length = 0.5;   // largest panel
  double min_panel = 0.0625;   // panel length next to joins and ray anchors
  double growth = 2.0;         // ratio between consecutive graded panels
  double max_radius = 1e3;     // hard cap on ray truncation
  // Optional log-magnitude of the integrand; when set, rays are truncated
  // where it falls tail_tolerance below its maximum over the contour.
  std::function<double(cplx)> log_envelope;
  // Absolute log scale: the cut is taken below min(max envelope, log_reference).
  double log_reference = std::numeric_limits<double>::infinity();
};

namespace contour {

inline constexpr double kPi = specfun::kPi;
inline const cplx kI{0.0, 1.0};

/// C_{a,phi}: {a + y e^{-i phi}} and {a + y e^{i phi}}, y >= 0.
inline Contour build_ray_contour(cplx a, double phi) {
  if (!(phi > 0.0 && phi < kPi)) throw DomainError("build_ray_contour: angle must lie in (0, pi)");
  Contour c;
  c.pieces.push_back(Ray{a, std::polar(1.0, -phi), true});
  c.pieces.push_back(Ray{a, std::polar(1.0, phi), false});
  return c;
}

/// Point of C_{b,phi} at imaginary part y.
inline cplx wedge_point(cplx b, double phi, double y) {
  const double dy = y - b.imag();
  const double t = std::abs(dy) / std::sin(phi);
  return b + t * std::polar(1.0, dy >= 0.0 ? phi : -phi);
}

/// C_{b,phi} with the band ylo <= Im z <= yhi replaced by the path
/// z_- -> x - i h -> x + i h -> z_+, where ylo = y0 - h and yhi = y0 + h.
inline Contour build_spur_contour(cplx b, double phi, double x, double y0, double h) {
  if (!(phi > 0.0 && phi < kPi)) throw GeometryError("build_spur_contour: angle must lie in (0, pi)");
  if (!(h > 0.0)) throw GeometryError("build_spur_contour: half height must be positive");
  const double ylo = y0 - h, yhi = y0 + h;
  const cplx zm = wedge_point(b, phi, ylo), zp = wedge_point(b, phi, yhi);
  const cplx lo_dir = std::polar(1.0, -phi), hi_dir = std::polar(1.0, phi);
  const cplx apex_lo(x, ylo), apex_hi(x, yhi);

  Contour c;
  if (ylo >= b.imag()) {
    c.pieces.push_back(Ray{b, lo_dir, true});
    c.pieces.push_back(Segment{b, zm});
  } else {
    c.pieces.push_back(Ray{zm, lo_dir, true});
  }
  c.pieces.push_back(Segment{zm, apex_lo});
  c.pieces.push_back(Segment{apex_lo, apex_hi});
  c.pieces.push_back(Segment{apex_hi, zp});
  if (yhi <= b.imag()) {
    c.pieces.push_back(Segment{zp, b});
    c.pieces.push_back(Ray{b, hi_dir, false});
  } else {
    c.pieces.push_back(Ray{zp, hi_dir, false});
  }
  return c;
}

/// D_v(b, phi, d): C_{b,phi} with the band |Im z - Im v| <= d replaced by the
/// path z_- -> v + 2d - i d -> v + 2d + i d -> z_+.
inline Contour build_detour_contour(cplx v, cplx b, double phi, double d) {
  if (!(d > 0.0)) throw GeometryError("build_detour_contour: d must be positive");
  if (!(d < 0.5)) throw GeometryError("build_detour_contour: d >= 1/2 puts v + 1 left of the detour");
  return build_spur_contour(b, phi, v.real() + 2.0 * d, v.imag(), d);
}

/// Vertical segment mu + rho -/+ i rho joined to the rays of C_{mu, pi/4}.
inline Contour build_limit_contour(double mu, double rho) {
  if (!(rho > 0.0)) throw DomainError("build_limit_contour: rho must be positive");
  const cplx lo(mu + rho, -rho), hi(mu + rho, rho);
  Contour c;
  c.pieces.push_back(Ray{lo, std::polar(1.0, -kPi / 4), true});
  c.pieces.push_back(Segment{lo, hi});
  c.pieces.push_back(Ray{hi, std::polar(1.0, kPi / 4), false});
  return c;
}

/// Outer contour of the legacy formula: rays from mu at angles pi -/+ phi.
inline Contour build_legacy_outer(double mu, double phi) { return build_ray_contour(mu, kPi - phi); }

/// Legacy inner contour in the s variable: the vertical line Re s = R with a
/// detour to x -/+ i d (x = 1/2 gives the textbook form).
inline Contour build_legacy_inner(double R, double d, double x = 0.5) {
  if (!(d > 0.0)) throw GeometryError("build_legacy_inner: d must be positive");
  const cplx lo(R, -d), hi(R, d);
  Contour c;
  c.pieces.push_back(Ray{lo, cplx(0.0, -1.0), true});
  c.pieces.push_back(Segment{lo, cplx(x, -d)});
  c.pieces.push_back(Segment{cplx(x, -d), cplx(x, d)});
  c.pieces.push_back(Segment{cplx(x, d), hi});
  c.pieces.push_back(Ray{hi, cplx(0.0, 1.0), false});
  return c;
}

/// The vertical line Re s = R.
inline Contour build_vertical_line(double R) {
  Contour c;
  c.pieces.push_back(Ray{cplx(R, 0.0), cplx(0.0, -1.0), true});
  c.pieces.push_back(Ray{cplx(R, 0.0), cplx(0.0, 1.0), false});
  return c;
}

/// True when z lies strictly to the left of the (upward oriented) contour,
/// by the parity of crossings of the horizontal half-line to the right of z.
inline bool lies_left(const Contour& c, cplx z) {
  constexpr double kFar = 1e9;
  int crossings = 0;
  auto edge = [&](cplx p, cplx q) {
    if ((p.imag() > z.imag()) != (q.imag() > z.imag())) {
      const double t = (z.imag() - p.imag()) / (q.imag() - p.imag());
      const double x = p.real() + t * (q.real() - p.real());
      if (x > z.real()) ++crossings;
    }
  };
  for (const auto& piece : c.pieces) {
    if (const auto* s = std::get_if<Segment>(&piece)) edge(s->start, s->end);
    else {
      const auto& r = std::get<Ray>(piece);
      edge(r.anchor, r.anchor + kFar * r.direction);
    }
  }
  return crossings % 2 == 1;
}

inline double distance_to_segment(cplx z, cplx p, cplx q) {
  const cplx d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - p);
  const double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (p + t * d));
}

/// Euclidean distance from z to the contour.
inline double distance_to_contour(const Contour& c, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : c.pieces) {
    if (const auto* s = std::get_if<Segment>(&piece)) {
      best = std::min(best, distance_to_segment(z, s->start, s->end));
    } else {
      const auto& r = std::get<Ray>(piece);
      const double t = std::max(0.0, ((z - r.anchor) * std::conj(r.direction)).real());
      best = std::min(best, std::abs(z - (r.anchor + t * r.direction)));
    }
  }
  return best;
}

namespace detail {

// Panel break points on [0, L], graded from min_panel at graded ends.
inline std::vector<double> graded_breaks(double L, const DiscretizeOptions& o, bool grade_start, bool grade_end) {
  std::vector<double> left{0.0}, right{L};
  double h_left = grade_start ? o.min_panel : o.panel_length;
  double h_right = grade_end ? o.min_panel : o.panel_length;
  double a = 0.0, b = L;
  while (b - a > 1e-14 * std::max(1.0, L)) {
    if (h_left + h_right >= b - a) break;
    if (h_left <= h_right) {
      a += h_left;
      left.push_back(a);
      h_left = std::min(h_left * o.growth, o.panel_length);
    } else {
      b -= h_right;
      right.push_back(b);
      h_right = std::min(h_right * o.growth, o.panel_length);
    }
  }
  const double gap = b - a;
  if (gap > 1e-14 * std::max(1.0, L)) {
    const int n = std::max(1, static_cast<int>(std::ceil(gap / o.panel_length - 1e-9)));
    for (int k = 1; k < n; ++k) left.push_back(a + gap * k / n);
  }
  std::vector<double> out = left;
  for (auto it = right.rbegin(); it != right.rend(); ++it) out.push_back(*it);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) < 1e-15; }),
            out.end());
  return out;
}

inline void add_panels(QuadratureGrid& g, cplx origin, cplx dir, const std::vector<double>& breaks, int order,
                       bool reverse) {
  const auto& rule = quad::gauss_legendre(order);
  const cplx measure = 1.0 / (2.0 * kPi * kI);
  std::vector<std::pair<cplx, cplx>> out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double t0 = breaks[p], t1 = breaks[p + 1];
    const double half = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
    if (half <= 0.0) continue;
    for (int k = 0; k < order; ++k) {
      const double t = mid + half * rule.nodes[k];
      out.emplace_back(origin + t * dir, rule.weights[k] * half * dir * measure);
    }
  }
  if (reverse) {
    std::reverse(out.begin(), out.end());
    for (auto& [z, w] : out) w = -w;
  }
  for (auto& [z, w] : out) {
    g.nodes.push_back(z);
    g.weights.push_back(w);
  }
}

inline double hint_radius(const DiscretizeOptions& o) {
  const double target = -std::log(o.tail_tolerance);
  const double rate = std::max(o.decay_rate_hint, 1e-6);
  double lo = 0.0, hi = 1.0;
  while (rate * hi * std::log1p(hi) < target) {
    hi *= 2.0;
    if (hi > o.max_radius) {
      throw ConvergenceError("discretize: truncation radius exceeds the hard cap for the requested tolerance");
    }
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate * mid * std::log1p(mid) < target) lo = mid; else hi = mid;
  }
  return hi;
}

inline std::vector<double> probe_points(const DiscretizeOptions& o) {
  std::vector<double> ts;
  double t = 0.0;
  while (t < o.max_radius) {
    t += std::max(0.5 * o.min_panel, std::min(0.25 * o.panel_length, 0.05 * (1.0 + t)) + 0.02 * t);
    ts.push_back(t);
  }
  return ts;
}

}  // namespace detail

/// Composite Gauss-Legendre discretization. Panels shrink geometrically to
/// min_panel next to every join and ray anchor.
inline QuadratureGrid discretize(const Contour& c, const DiscretizeOptions& o) {
  if (o.panel_order < 4 || o.panel_order > 64) throw DomainError("discretize: panel_order must lie in [4, 64]");
  if (!(o.tail_tolerance > 0.0)) throw DomainError("discretize: tail_tolerance must be positive");
  if (!(o.panel_length > 0.0) || !(o.min_panel > 0.0) || !(o.growth > 1.0)) {
    throw DomainError("discretize: invalid panel settings");
  }

  // Truncation lengths for each ray.
  std::vector<double> ray_len(c.pieces.size(), 0.0);
  double tail = 0.0;
  if (o.log_envelope) {
    const auto ts = detail::probe_points(o);
    double log_max = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> env(c.pieces.size());
    for (std::size_t i = 0; i < c.pieces.size(); ++i) {
      if (const auto* s = std::get_if<Segment>(&c.pieces[i])) {
        for (int k = 0; k <= 8; ++k) {
          const double v = o.log_envelope(s->start + (s->end - s->start) * (k / 8.0));
          if (std::isfinite(v)) log_max = std::max(log_max, v);
        }
      } else {
        const auto& r = std::get<Ray>(c.pieces[i]);
        log_max = std::max(log_max, o.log_envelope(r.anchor));
        for (double t : ts) {
          const double v = o.log_envelope(r.anchor + t * r.direction);
          env[i].push_back(v);
          if (std::isfinite(v)) log_max = std::max(log_max, v);
          // Stop probing once far below any plausible maximum.
          if (env[i].size() > 8 && v < std::min(log_max, o.log_reference) + std::log(o.tail_tolerance) - 40.0) break;
        }
      }
    }
    const double cut = std::min(log_max, o.log_reference) + std::log(o.tail_tolerance);
    for (std::size_t i = 0; i < c.pieces.size(); ++i) {
      if (!std::holds_alternative<Ray>(c.pieces[i])) continue;
      std::size_t last_above = 0;
      bool any = false;
      for (std::size_t k = 0; k < env[i].size(); ++k) {
        if (!(env[i][k] < cut)) {
          last_above = k;
          any = true;
        }
      }
      const std::size_t idx = any ? last_above + 1 : 0;
      if (idx >= env[i].size()) {
        throw ConvergenceError("discretize: integrand envelope does not decay below tolerance within max_radius");
      }
      ray_len[i] = ts[idx];
      tail = std::max(tail, std::exp(env[i][idx] - std::min(log_max, o.log_reference)));
    }
  } else {
    const double R = detail::hint_radius(o);
    for (std::size_t i = 0; i < c.pieces.size(); ++i) {
      if (std::holds_alternative<Ray>(c.pieces[i])) ray_len[i] = R;
    }
    tail = std::exp(-o.decay_rate_hint * R * std::log1p(R));
  }

  QuadratureGrid g;
  g.panel_order = o.panel_order;
  g.tail_estimate = tail;
  for (std::size_t i = 0; i < c.pieces.size(); ++i) {
    if (const auto* s = std::get_if<Segment>(&c.pieces[i])) {
      const double L = std::abs(s->end - s->start);
      if (L <= 0.0) continue;
      const cplx dir = (s->end - s->start) / L;
      detail::add_panels(g, s->start, dir, detail::graded_breaks(L, o, true, true), o.panel_order, false);
      g.truncation_radius = std::max(g.truncation_radius, std::max(std::abs(s->start), std::abs(s->end)));
    } else {
      const auto& r = std::get<Ray>(c.pieces[i]);
      const double L = ray_len[i];
      detail::add_panels(g, r.anchor, r.direction, detail::graded_breaks(L, o, true, false), o.panel_order,
                         r.incoming);
      g.truncation_radius = std::max(g.truncation_radius, std::abs(r.anchor + L * r.direction));
    }
  }
  return g;
}

inline QuadratureGrid discretize(const Contour& c, int panel_order, double tail_tolerance,
                                 double decay_rate_hint) {
  DiscretizeOptions o;
  o.panel_order = panel_order;
  o.tail_tolerance = tail_tolerance;
  o.decay_rate_hint = decay_rate_hint;
  return discretize(c, o);
}

}  // namespace contour
}  // namespace loggamma
