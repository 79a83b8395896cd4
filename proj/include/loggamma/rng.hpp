#pragma once
// Reproducible random streams and the gamma-family samplers used by the
// polymer simulation. A stream is identified by (seed, stream index) so
// samples can be generated in any order or thread layout.

#include <cmath>
#include <cstdint>
#include <random>

#include "loggamma/errors.hpp"

namespace loggamma {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// log of a Gamma(shape, 1) variate (Marsaglia-Tsang; boosted for shape < 1).
  double log_gamma_variate(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("gamma sampler: shape must be positive");
    if (shape == 1.0) return std::log(-std::log(uniform()));
    if (shape < 1.0) return log_gamma_variate(shape + 1.0) + std::log(uniform()) / shape;
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return std::log(d) + std::log(v);
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return std::log(d) + std::log(v);
    }
  }

  /// Gamma(shape, 1) variate in linear scale; same algorithm as above.
  double gamma_variate(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("gamma sampler: shape must be positive");
    if (shape == 1.0) return -std::log(uniform());
    if (shape < 1.0) return gamma_variate(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// log of an inverse-gamma variate X = 1/G.
  double log_inverse_gamma(double shape) { return -log_gamma_variate(shape); }

  /// Inverse-gamma variate with the given shape.
  double inverse_gamma(double shape) { return std::exp(log_inverse_gamma(shape)); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline double sample_inverse_gamma(double theta_ij, RngStream& rng) { return rng.inverse_gamma(theta_ij); }

}  // namespace loggamma
