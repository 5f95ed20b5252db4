#pragma once

#include <cmath>
#include <limits>

#include "truncmom/common.hpp"

namespace truncmom {

namespace detail {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set). Relative error of the
// rational part is below 1e-15 on the positive half axis.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczosCoeff[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // log(2*pi)/2

}  // namespace detail

// Natural log of Gamma(x) for x > 0, Lanczos approximation with a downward
// recurrence for x < 0.5. Accurate to ~1e-14 relative across the positive axis.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
  if (x < 0.5) {
    // Gamma(x) = Gamma(x+1)/x
    return log_gamma(x + 1.0) - std::log(x);
  }
  const double z = x - 1.0;
  double series = detail::kLanczosCoeff[0];
  for (int i = 1; i < 9; ++i) series += detail::kLanczosCoeff[i] / (z + i);
  const double t = z + detail::kLanczosG + 0.5;
  return detail::kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(series);
}

namespace detail {

// Asymptotic tails for the polygamma family, valid for large arguments.
// Shift threshold 10 keeps the truncation error below 1e-16 relative.
inline constexpr double kPolygammaShift = 10.0;

inline double digamma_asymptotic(double x) {
  const double r = 1.0 / (x * x);
  // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^{2n})
  double s = -1.0 / 132.0 + r * (691.0 / 32760.0 - r / 12.0);
  s = 1.0 / 240.0 + r * s;
  s = -1.0 / 252.0 + r * s;
  s = 1.0 / 120.0 + r * s;
  s = -1.0 / 12.0 + r * s;
  return std::log(x) - 0.5 / x + r * s;
}

inline double trigamma_asymptotic(double x) {
  const double r = 1.0 / (x * x);
  // psi'(x) ~ 1/x + 1/(2x^2) + sum B_2n / x^{2n+1}
  double s = 7.0 / 6.0 - r * 691.0 / 2730.0;
  s = 5.0 / 66.0 + r * s;
  s = -1.0 / 30.0 + r * s;
  s = 1.0 / 42.0 + r * s;
  s = -1.0 / 30.0 + r * s;
  s = 1.0 / 6.0 + r * s;
  return 1.0 / x + 0.5 * r + s * r / x;
}

inline double tetragamma_asymptotic(double x) {
  const double r = 1.0 / (x * x);
  // psi''(x) ~ -1/x^2 - 1/x^3 - 1/(2x^4) + ...
  double s = 691.0 / 210.0;
  s = -5.0 / 6.0 + r * s;
  s = 3.0 / 10.0 + r * s;
  s = -1.0 / 6.0 + r * s;
  s = 1.0 / 6.0 + r * s;
  return -r - r / x - 0.5 * r * r + s * r * r * r;
}

}  // namespace detail

// psi(x) = d/dx log Gamma(x), x > 0.
inline double digamma(double x) {
  if (!(x > 0.0)) throw domain_error("digamma: argument must be positive");
  double acc = 0.0;
  while (x < detail::kPolygammaShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  return acc + detail::digamma_asymptotic(x);
}

// psi'(x), x > 0.
inline double trigamma(double x) {
  if (!(x > 0.0)) throw domain_error("trigamma: argument must be positive");
  double acc = 0.0;
  while (x < detail::kPolygammaShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  return acc + detail::trigamma_asymptotic(x);
}

// psi''(x), x > 0.
inline double tetragamma(double x) {
  if (!(x > 0.0)) throw domain_error("tetragamma: argument must be positive");
  double acc = 0.0;
  while (x < detail::kPolygammaShift) {
    acc -= 2.0 / (x * x * x);
    x += 1.0;
  }
  return acc + detail::tetragamma_asymptotic(x);
}

// psi^{(n)} for n in {0,1,2}; the cumulant code indexes derivatives this way.
inline double polygamma(int n, double x) {
  switch (n) {
    case 0: return digamma(x);
    case 1: return trigamma(x);
    case 2: return tetragamma(x);
    default:
      throw invalid_parameter("polygamma: only orders 0..2 are implemented");
  }
}

// log of the classical Beta function B(a, b), a, b > 0.
inline double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

// Standard normal CDF.
inline double normal_cdf(double s) {
  return 0.5 * std::erfc(-s / std::sqrt(2.0));
}

}  // namespace truncmom
