#pragma once
// Log-gamma polymer sampling: weights, partition function recursion,
// rescaled free energy, Monte Carlo Laplace transforms and a brute-force
// path enumeration oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "loggamma/errors.hpp"
#include "loggamma/parallel.hpp"
#include "loggamma/rng.hpp"
#include "loggamma/scaling.hpp"

namespace loggamma {

/// Weight w_{i,j} is inverse-gamma with shape alpha[i] - a[j];
/// i indexes the M_total columns and j the N_total rows.
struct ModelSpec {
  double theta = 1.0;
  std::vector<double> a;
  std::vector<double> alpha;

  long M_total() const { return static_cast<long>(alpha.size()); }
  long N_total() const { return static_cast<long>(a.size()); }

  void validate() const {
    if (alpha.empty() || a.empty()) throw DomainError("ModelSpec: empty parameter vector");
    const double gap = *std::min_element(alpha.begin(), alpha.end()) - *std::max_element(a.begin(), a.end());
    if (!(gap > 0.0)) throw DomainError("ModelSpec: requires min(alpha) - max(a) > 0");
  }

  static ModelSpec homogeneous(long M, long N, double theta) {
    ModelSpec s;
    s.theta = theta;
    s.a.assign(static_cast<std::size_t>(N), 0.0);
    s.alpha.assign(static_cast<std::size_t>(M), theta);
    return s;
  }
};

struct BBPLayout {
  std::vector<double> x;  // r row perturbations
  std::vector<double> y;  // c column perturbations

  int r() const { return static_cast<int>(x.size()); }
  int c() const { return static_cast<int>(y.size()); }

  void validate() const {
    if (!x.empty() && !y.empty() &&
        !(*std::min_element(y.begin(), y.end()) > *std::max_element(x.begin(), x.end()))) {
      throw DomainError("BBPLayout: requires min(y) > max(x)");
    }
  }
};

struct SampleBatch {
  std::uint64_t seed = 0;
  long n_samples = 0;
  std::vector<double> log_Z;
  std::vector<double> F;
};

namespace polymer {

inline double log_add_exp(double x, double y) {
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::abs(x - y)));
}

/// Deterministic log-space recursion over a given matrix of log weights,
/// indexed log_w[i][j] with i the column and j the row.
inline double log_partition_weights(const std::vector<std::vector<double>>& log_w) {
  const std::size_t M = log_w.size();
  if (M == 0 || log_w[0].empty()) throw DomainError("log_partition_weights: empty matrix");
  const std::size_t N = log_w[0].size();
  std::vector<double> row(N);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double lw = log_w[i][j];
      if (i == 0 && j == 0) row[j] = lw;
      else if (i == 0) row[j] = lw + row[j - 1];
      else if (j == 0) row[j] = lw + row[j];
      else row[j] = lw + log_add_exp(row[j], row[j - 1]);
    }
  }
  return row[N - 1];
}

namespace detail {

/// Log-space recursion, one weight per cell, rolling along the shorter side.
inline double log_partition_logspace(const ModelSpec& spec, RngStream& rng) {
  const bool roll_rows = spec.N_total() <= spec.M_total();
  const std::vector<double>& outer_p = roll_rows ? spec.alpha : spec.a;
  const std::vector<double>& inner_p = roll_rows ? spec.a : spec.alpha;
  const double sgn = roll_rows ? 1.0 : -1.0;  // shape = alpha_i - a_j in both layouts
  const std::size_t n_in = inner_p.size();
  std::vector<double> row(n_in);
  for (std::size_t i = 0; i < outer_p.size(); ++i) {
    for (std::size_t j = 0; j < n_in; ++j) {
      const double lw = rng.log_inverse_gamma(sgn * (outer_p[i] - inner_p[j]));
      if (i == 0 && j == 0) row[j] = lw;
      else if (i == 0) row[j] = lw + row[j - 1];
      else if (j == 0) row[j] = lw + row[j];
      else row[j] = lw + log_add_exp(row[j], row[j - 1]);
    }
  }
  return row[n_in - 1];
}

/// Linear-scale recursion swept by anti-diagonals. All cells on a diagonal
/// carry paths of equal length, so each diagonal is divided by its maximum
/// and the log of that factor accumulated; entries far below the maximum are
/// flushed to zero.
inline double log_partition_linear(const ModelSpec& spec, RngStream& rng) {
  const long M = spec.M_total(), N = spec.N_total();
  std::vector<double> prev(static_cast<std::size_t>(M), 0.0), cur(static_cast<std::size_t>(M), 0.0);
  double log_scale = 0.0;
  for (long k = 0; k < M + N - 1; ++k) {
    const long i_lo = std::max(0L, k - (N - 1)), i_hi = std::min(M - 1, k);
    double mx = 0.0;
    for (long i = i_lo; i <= i_hi; ++i) {
      const long j = k - i;
      const double shape = spec.alpha[i] - spec.a[j];
      const double w = 1.0 / rng.gamma_variate(shape);
      double s;
      if (k == 0) s = 1.0;
      else s = (i > 0 ? prev[i - 1] : 0.0) + (j > 0 ? prev[i] : 0.0);
      cur[i] = w * s;
      mx = std::max(mx, cur[i]);
    }
    if (!(mx > 0.0) || !std::isfinite(mx)) throw OverflowError("log_partition: diagonal scale out of range");
    const double inv = 1.0 / mx;
    for (long i = i_lo; i <= i_hi; ++i) {
      const double v = cur[i] * inv;
      cur[i] = v < 1e-280 ? 0.0 : v;
    }
    log_scale += std::log(mx);
    std::swap(prev, cur);
  }
  return log_scale + std::log(prev[M - 1]);
}

}  // namespace detail

/// Draws one weight matrix and returns log Z. Shapes below 0.25 use the
/// log-space recursion, where tiny gamma variates cannot underflow.
inline double log_partition(const ModelSpec& spec, RngStream& rng) {
  const double min_shape = *std::min_element(spec.alpha.begin(), spec.alpha.end()) -
                           *std::max_element(spec.a.begin(), spec.a.end());
  if (min_shape < 0.25) return detail::log_partition_logspace(spec, rng);
  return detail::log_partition_linear(spec, rng);
}

/// Number of up-right paths from (1,1) to (M,N), or -1 above the cap.
inline long path_count(long M, long N, long cap = 1'000'000) {
  double c = 1.0;
  const long k = std::min(M - 1, N - 1), n = M + N - 2;
  for (long t = 1; t <= k; ++t) {
    c = c * static_cast<double>(n - k + t) / static_cast<double>(t);
    if (c > static_cast<double>(cap) + 0.5) return -1;
  }
  return static_cast<long>(std::llround(c));
}

/// Exhaustive log of the sum over all paths; weights[i][j] > 0.
inline double enumerate_paths(long M, long N, const std::vector<std::vector<double>>& weights) {
  if (M < 1 || N < 1) throw DomainError("enumerate_paths: dimensions must be positive");
  if (static_cast<long>(weights.size()) != M) throw DomainError("enumerate_paths: weight matrix shape mismatch");
  for (const auto& col : weights) {
    if (static_cast<long>(col.size()) != N) throw DomainError("enumerate_paths: weight matrix shape mismatch");
  }
  if (path_count(M, N) < 0) throw DomainError("enumerate_paths: path count exceeds 1e6");

  std::vector<double> path_logs;
  auto rec = [&](auto&& self, long i, long j, double acc) -> void {
    acc += std::log(weights[i][j]);
    if (i == M - 1 && j == N - 1) {
      path_logs.push_back(acc);
      return;
    }
    if (i + 1 < M) self(self, i + 1, j, acc);
    if (j + 1 < N) self(self, i, j + 1, acc);
  };
  rec(rec, 0, 0, 0.0);
  const double mx = *std::max_element(path_logs.begin(), path_logs.end());
  double s = 0.0;
  for (double v : path_logs) s += std::exp(v - mx);
  return mx + std::log(s);
}

/// Critically scaled spec: the first r rows and c columns carry
/// z_c + (x or y) sigma^{-1} M^{-1/3}; remaining rows 0, columns theta.
inline ModelSpec build_bbp_spec(const ModelShape& shape, const BBPLayout& layout, const ScalingConstants& sc) {
  shape.validate();
  layout.validate();
  const double s = 1.0 / (sc.sigma * std::cbrt(static_cast<double>(shape.M)));
  ModelSpec spec;
  spec.theta = shape.theta;
  for (double x : layout.x) spec.a.push_back(sc.z_c + x * s);
  spec.a.insert(spec.a.end(), static_cast<std::size_t>(shape.N), 0.0);
  for (double y : layout.y) spec.alpha.push_back(sc.z_c + y * s);
  spec.alpha.insert(spec.alpha.end(), static_cast<std::size_t>(shape.M), shape.theta);
  const double gap = *std::min_element(spec.alpha.begin(), spec.alpha.end()) -
                     *std::max_element(spec.a.begin(), spec.a.end());
  if (!(gap > 0.0)) throw DomainError("build_bbp_spec: infeasible scaling, min(alpha) - max(a) <= 0 at this M");
  return spec;
}

/// Rescaled free energy (log Z + M h) / (M^{1/3} sigma).
inline double rescale(double log_Z, const ModelShape& shape, const ScalingConstants& sc) {
  const double M = static_cast<double>(shape.M);
  return (log_Z + M * sc.h) / (std::cbrt(M) * sc.sigma);
}

/// Sample k is drawn from stream (seed, k), so the batch does not depend on
/// the thread count.
inline SampleBatch run_batch(const ModelSpec& spec, const ModelShape& shape, const ScalingConstants& sc,
                             long n_samples, std::uint64_t seed, int threads = 1) {
  if (n_samples < 1) throw DomainError("run_batch: n_samples must be positive");
  spec.validate();
  SampleBatch b;
  b.seed = seed;
  b.n_samples = n_samples;
  b.log_Z.resize(static_cast<std::size_t>(n_samples));
  b.F.resize(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, threads, [&](long k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k));
    b.log_Z[k] = log_partition(spec, rng);
  });
  for (long k = 0; k < n_samples; ++k) b.F[k] = rescale(b.log_Z[k], shape, sc);
  return b;
}

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// exp(-u Z) evaluated as exp(-exp(log u + log Z)) with guarded exponents.
inline double laplace_term(double log_u, double log_Z) {
  const double e = log_u + log_Z;
  if (e > 700.0) return 0.0;
  if (e < -745.0) return 1.0;
  return std::exp(-std::exp(e));
}

/// Monte Carlo mean and standard error of exp(-u Z), with u = exp(log_u).
inline McEstimate mc_laplace_log(double log_u, const ModelSpec& spec, long n_samples, std::uint64_t seed,
                                 int threads = 1) {
  if (n_samples < 1) throw DomainError("mc_laplace: n_samples must be positive");
  spec.validate();
  std::vector<double> lz(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, threads, [&](long k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k));
    lz[k] = log_partition(spec, rng);
  });
  double mean = 0.0, m2 = 0.0;
  for (long k = 0; k < n_samples; ++k) {
    const double v = laplace_term(log_u, lz[k]);
    const double d = v - mean;
    mean += d / static_cast<double>(k + 1);
    m2 += d * (v - mean);
  }
  const double var = n_samples > 1 ? m2 / static_cast<double>(n_samples - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

/// Laplace transform estimate from already simulated log Z values.
inline McEstimate laplace_from_samples(double log_u, const std::vector<double>& log_Z) {
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < log_Z.size(); ++k) {
    const double v = laplace_term(log_u, log_Z[k]);
    const double d = v - mean;
    mean += d / static_cast<double>(k + 1);
    m2 += d * (v - mean);
  }
  const double n = static_cast<double>(log_Z.size());
  const double var = log_Z.size() > 1 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

inline McEstimate mc_laplace(double u, const ModelSpec& spec, long n_samples, std::uint64_t seed, int threads = 1) {
  if (!(u >= 0.0)) throw DomainError("mc_laplace: u must be nonnegative");
  if (u == 0.0) return {1.0, 0.0};
  return mc_laplace_log(std::log(u), spec, n_samples, seed, threads);
}

}  // namespace polymer
}  // namespace loggamma
