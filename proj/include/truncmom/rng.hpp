#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "truncmom/common.hpp"

namespace truncmom {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// xoshiro256++ bit generator. Each Monte Carlo sample owns a stream keyed by
// (seed, sample_index), which makes estimates independent of scheduling.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  Xoshiro256() : Xoshiro256(0xdeadbeefULL, 0) {}
  Xoshiro256(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& w : s_) w = detail::splitmix64(sm);
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Convenience sampling layer on top of the raw bit stream. All algorithms are
// fixed here (not delegated to the standard library) so that a given (seed,
// index) pair reproduces bit-identical values on any build of this code.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : gen_(seed, stream) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the paired value is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  std::complex<double> complex_normal() { return {normal(), normal()}; }

  // Gamma(shape, 1) by Marsaglia-Tsang squeeze, boosted below shape 1.
  double gamma(double shape) {
    if (!(shape > 0.0))
      throw invalid_parameter("RngStream::gamma: shape must be positive");
    if (shape < 1.0) {
      double u = uniform();
      while (u == 0.0) u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double x = normal();
      const double base = 1.0 + c * x;
      if (base <= 0.0) continue;
      const double v = base * base * base;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 &&
          std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v;
    }
  }

  // Beta(a, b) as a Gamma ratio; exact for the fractional shapes used by the
  // log-determinant identities. b == 0 is the degenerate point mass at 1.
  double beta(double a, double b) {
    if (!(a > 0.0))
      throw invalid_parameter("RngStream::beta: a must be positive");
    if (b == 0.0) return 1.0;
    if (!(b > 0.0))
      throw invalid_parameter("RngStream::beta: b must be nonnegative");
    const double ga = gamma(a);
    const double gb = gamma(b);
    return ga / (ga + gb);
  }

  // +-1 with equal probability.
  double rademacher() { return (gen_() & 1) ? 1.0 : -1.0; }

  std::uint64_t bits() { return gen_(); }

 private:
  Xoshiro256 gen_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace truncmom
