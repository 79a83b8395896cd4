#pragma once
// Nystrom evaluation of Fredholm determinants det(I + K) on discretized
// contours, and the distribution functions built from them.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loggamma/contour.hpp"
#include "loggamma/errors.hpp"
#include "loggamma/kernels.hpp"
#include "loggamma/parallel.hpp"
#include "loggamma/polymer.hpp"
#include "loggamma/scaling.hpp"

namespace loggamma {

struct DetResult {
  cplx value{1.0, 0.0};
  std::pair<int, int> grid_sizes{0, 0};
  double est_error = 0.0;
  std::string metadata;
};

namespace fredholm {

/// det(I + A) by partial-pivoting LU.
inline cplx det_identity_plus(const Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  if (n == 0) return 1.0;
  Eigen::MatrixXcd B = A;
  B.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B);
  const auto& LU = lu.matrixLU();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (LU(i, i) == cplx(0.0) || !std::isfinite(std::abs(LU(i, i)))) {
      throw NumericError("fredholm: singular factorization");
    }
  }
  const cplx d = lu.determinant();
  if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) throw NumericError("fredholm: non-finite determinant");
  return d;
}

/// Nystrom matrix A_ij = K(v_i, v_j) w_j for a pointwise kernel.
inline Eigen::MatrixXcd nystrom_matrix(const std::function<cplx(cplx, cplx)>& K, const QuadratureGrid& g) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = K(g.nodes[i], g.nodes[j]) * g.weights[j];
  }
  return A;
}

/// det(I + K) on a single grid.
inline cplx fredholm_det(const std::function<cplx(cplx, cplx)>& K, const QuadratureGrid& g) {
  return det_identity_plus(nystrom_matrix(K, g));
}

/// Two-grid determinant: the same panels at Gauss orders p and p + 8. When
/// the difference exceeds target the order keeps rising by 8 up to max_order.
inline DetResult two_grid(const std::function<Eigen::MatrixXcd(int)>& build, int order, std::string metadata = {},
                          double target = 1e-9, int max_order = 48) {
  Eigen::MatrixXcd A = build(order);
  cplx prev = det_identity_plus(A);
  int prev_n = static_cast<int>(A.rows());
  DetResult r;
  r.metadata = std::move(metadata);
  for (;;) {
    order += 8;
    A = build(order);
    const cplx next = det_identity_plus(A);
    r.value = next;
    r.grid_sizes = {prev_n, static_cast<int>(A.rows())};
    r.est_error = std::abs(next - prev);
    if (r.est_error <= target || order + 8 > max_order) break;
    prev = next;
    prev_n = static_cast<int>(A.rows());
  }
  r.metadata += " (orders " + std::to_string(order - 8) + "/" + std::to_string(order) + ")";
  return r;
}

/// Largest outer grid accepted before the dense matrix is formed.
inline constexpr std::size_t kMaxNodes = 8000;

inline void check_grid_size(const QuadratureGrid& g, const char* what) {
  if (g.size() > kMaxNodes) {
    throw ConvergenceError(std::string(what) + ": outer grid needs " + std::to_string(g.size()) +
                           " nodes (truncation radius " + std::to_string(g.truncation_radius) +
                           "); the kernel decays too slowly for a dense determinant");
  }
}

/// Kernel-matrix builders with row-wise inner weights.
inline Eigen::MatrixXcd finite_matrix(const kernels::FiniteKernel& K, int order, int threads = 1) {
  const QuadratureGrid outer = K.outer_grid(order);
  check_grid_size(outer, "finite_matrix");
  const Eigen::Index n = static_cast<Eigen::Index>(outer.size());
  Eigen::MatrixXcd A(n, n);
  parallel_for(n, threads, [&](long i) {
    std::vector<cplx> w, f;
    K.row_weights(outer.nodes[i], order, w, f);
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx vp = outer.nodes[j];
      cplx s = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) s += f[k] / (w[k] - vp);
      A(i, j) = s * outer.weights[j];
    }
  });
  return A;
}

inline Eigen::MatrixXcd legacy_matrix(const kernels::LegacyKernel& K, int order, int threads = 1) {
  const QuadratureGrid outer = K.outer_grid(order);
  check_grid_size(outer, "legacy_matrix");
  const Eigen::Index n = static_cast<Eigen::Index>(outer.size());
  Eigen::MatrixXcd A(n, n);
  parallel_for(n, threads, [&](long i) {
    std::vector<cplx> w, f;
    K.row_weights(outer.nodes[i], order, w, f);
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx vp = outer.nodes[j];
      cplx s = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) s += f[k] / (w[k] - vp);
      A(i, j) = s * outer.weights[j];
    }
  });
  return A;
}

inline Eigen::MatrixXcd limit_matrix(const kernels::LimitKernel& K, int order) {
  const QuadratureGrid outer = K.outer_grid(order);
  check_grid_size(outer, "limit_matrix");
  const QuadratureGrid inner = K.inner_grid(order);
  const Eigen::Index n = static_cast<Eigen::Index>(outer.size());
  const Eigen::Index m = static_cast<Eigen::Index>(inner.size());
  // K(v_i, v_j) = sum_k F_ik / (w_k - v_j): a product of two dense matrices.
  Eigen::MatrixXcd F(n, m), C(m, n);
  std::vector<cplx> f;
  for (Eigen::Index i = 0; i < n; ++i) {
    K.row_weights(outer.nodes[i], inner, f);
    for (Eigen::Index k = 0; k < m; ++k) F(i, k) = f[k];
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) C(k, j) = outer.weights[j] / (inner.nodes[k] - outer.nodes[j]);
  }
  return F * C;
}

inline double real_checked(const DetResult& r, const char* what, double tol = 1e-6) {
  if (std::abs(r.value.imag()) > tol) {
    throw NumericError(std::string(what) + ": imaginary residual " + std::to_string(r.value.imag()) +
                       " exceeds tolerance");
  }
  return r.value.real();
}

/// Settings shared by the distribution-level entry points.
struct QuadSettings {
  int panel_order = 16;
  double target_error = 1e-9;
  int max_order = 48;
  KernelQuad finite{};
  KernelQuad limit = kernels::LimitKernel::limit_defaults();
  int threads = 1;
};

/// det(I + K_r^BBP) for an explicit kernel specification.
inline DetResult limit_det(const kernels::LimitKernelSpec& ks, const QuadSettings& q = {}) {
  const kernels::LimitKernel K(ks, q.limit);
  return two_grid([&](int order) { return limit_matrix(K, order); }, q.panel_order,
                  ks.form == kernels::LimitForm::Wedge ? "limit kernel, wedge contours" : "limit kernel, D-tilde contour",
                  q.target_error, q.max_order);
}

/// F_GUE(r) from the limit kernel with no perturbations on the D-tilde contour.
inline DetResult f_gue_det(double r, const QuadSettings& q = {}) {
  auto ks = kernels::LimitKernelSpec::defaults({}, {}, r, kernels::LimitForm::Dtilde);
  return limit_det(ks, q);
}

inline double f_gue(double r, const QuadSettings& q = {}) { return real_checked(f_gue_det(r, q), "f_gue"); }

/// F_BBP(r) from the wedge form; anchors default to a = mu, b = mu + rho.
inline DetResult f_bbp_det(const std::vector<double>& x, const std::vector<double>& y, double r,
                           const QuadSettings& q = {}, std::optional<std::pair<double, double>> anchors = {}) {
  auto ks = kernels::LimitKernelSpec::defaults(x, y, r, kernels::LimitForm::Wedge);
  if (anchors) {
    ks.a = anchors->first;
    ks.b = anchors->second;
  }
  return limit_det(ks, q);
}

inline double f_bbp(const std::vector<double>& x, const std::vector<double>& y, double r, const QuadSettings& q = {},
                    std::optional<std::pair<double, double>> anchors = {}) {
  return real_checked(f_bbp_det(x, y, r, q, anchors), "f_bbp");
}

/// E[exp(-u Z)] = det(I + K_u) on C_{a, 3 pi/4} with detour inner contours.
inline DetResult finite_laplace(double log_u, const ModelSpec& spec, const ContourParams& cp,
                                const QuadSettings& q = {}, double tau = 0.0, bool allow_small_n = false) {
  if (spec.N_total() < 9 && !allow_small_n) {
    throw DomainError("finite_laplace: the identity is established for N >= 9; pass allow_small_n to probe smaller N");
  }
  FiniteKernelSpec ks{spec, log_u, tau, cp.a, cp.b, cp.d};
  const kernels::FiniteKernel K(ks, q.finite);
  return two_grid([&](int order) { return finite_matrix(K, order, q.threads); }, q.panel_order,
                  tau > 0.0 ? "finite kernel, tau deformed" : "finite kernel", q.target_error, q.max_order);
}

/// The older s-variable formula (requires min(alpha) - max(a) > 1).
inline DetResult legacy_laplace(double log_u, const ModelSpec& spec, double tau, const QuadSettings& q = {}) {
  const kernels::LegacyKernel K(spec, log_u, tau, q.finite);
  return two_grid([&](int order) { return legacy_matrix(K, order, q.threads); }, q.panel_order, "legacy kernel", q.target_error,
                  q.max_order);
}

struct FiniteCdf {
  double value = 0.0;  // det at y
  double lower = 0.0;  // det at y - M^{-1/3}
  double upper = 0.0;  // det at y + M^{-1/3}
  DetResult det;
};

/// det(I + K_{u(y)}) = E[exp(-exp(sigma M^{1/3} (F - y)))], with the bracket
/// obtained from the offsets y -/+ M^{-1/3}.
inline FiniteCdf finite_cdf(double y, const ModelShape& shape, const ScalingConstants& sc, const BBPLayout& layout,
                            const QuadSettings& q = {}, bool allow_small_n = false) {
  const ModelSpec spec = polymer::build_bbp_spec(shape, layout, sc);
  const ContourParams cp = kernels::default_contour(spec, shape, sc, layout);
  const double eps = 1.0 / std::cbrt(static_cast<double>(shape.M));
  FiniteCdf out;
  out.det = finite_laplace(kernels::log_u_scaled(y, shape, sc), spec, cp, q, 0.0, allow_small_n);
  out.value = real_checked(out.det, "finite_cdf");
  out.lower = real_checked(finite_laplace(kernels::log_u_scaled(y - eps, shape, sc), spec, cp, q, 0.0, allow_small_n),
                           "finite_cdf");
  out.upper = real_checked(finite_laplace(kernels::log_u_scaled(y + eps, shape, sc), spec, cp, q, 0.0, allow_small_n),
                           "finite_cdf");
  return out;
}

}  // namespace fredholm
}  // namespace loggamma
