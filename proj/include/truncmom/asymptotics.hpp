#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "truncmom/common.hpp"
#include "truncmom/ensemble.hpp"
#include "truncmom/gamma_products.hpp"
#include "truncmom/quadrature.hpp"

namespace truncmom {

enum class CLTRegime { weak, strong, origin_strong };

// Limit-theorem coefficients for the log-modulus of the characteristic
// polynomial. In the weak regime the limit is standard normal after centering
// by e_beta log M and scaling by sqrt(v_beta log M); mean/variance then
// describe the standardized limit. In the strong regime no normalization is
// needed and mean/variance are the limit parameters themselves. For the
// origin law, e_beta and v_beta carry the log M coefficients of the centering
// and variance.
struct CLTParams {
  double e_beta = 0.0;
  double v_beta = 0.0;
  double mean = 0.0;
  double variance = 1.0;
  CLTRegime regime = CLTRegime::weak;
};

namespace detail {

inline double e_coefficient(int beta) {
  switch (beta) {
    case 1: return -0.5;
    case 2: return 0.0;
    case 4: return 0.5;
  }
  throw invalid_parameter("clt: beta must be 1, 2 or 4");
}

inline double v_coefficient(int beta) {
  switch (beta) {
    case 1: return 1.0;
    case 2: return 0.5;
    case 4: return 1.0;
  }
  throw invalid_parameter("clt: beta must be 1, 2 or 4");
}

}  // namespace detail

// Leading-order strong-non-unitarity approximation of R^{(beta)}_{2k}(x),
// assembled in log scale with the Gaussian-ensemble boundary factor. Uses
// mu = M/N directly; o(1) corrections are not modeled.
inline double strong_approx(const EnsembleSpec& spec, int k,
                            std::complex<double> x,
                            const QuadratureSpec& q = {}) {
  if (k < 1) throw invalid_parameter("strong_approx: k must be >= 1");
  if (spec.beta == 1 && x.imag() != 0.0)
    throw domain_error("strong_approx: beta=1 requires real x");
  const double mu = spec.mu();
  if (!(mu < 1.0))
    throw domain_error("strong_approx: requires mu = M/N in (0,1)");
  const double y = std::norm(x);
  if (!(y < 1.0))
    throw domain_error("strong_approx: requires |x| < 1");
  const double m = spec.m_trunc;
  const double a = 2.0 / spec.beta;

  double logv = (k * k / static_cast<double>(spec.beta) +
                 0.5 * k * (1.0 - a)) *
                std::log(m);
  logv += m * k * std::log(mu);
  // Saddle-point factor (t*)^{Mk(1/mu - 1)} with t* = (1-mu)/(1-|x|^2).
  logv += m * k * (1.0 / mu - 1.0) * std::log((1.0 - mu) / (1.0 - y));
  logv += (k + a * k * (k - 1)) *
          std::log(std::sqrt(1.0 - mu) / (1.0 - y));
  logv += 0.5 * k * std::log(2.0 * M_PI);
  for (int j = 0; j < k; ++j) logv -= log_gamma(1.0 + a * j);

  const double s = std::sqrt(m) * (mu - y) / (mu * std::sqrt(1.0 - mu));
  const double cdf =
      gbe_max_cdf(k, static_cast<int>(spec.beta_prime()), s, q);
  return std::exp(logv) * cdf;
}

// Gaussian boundary factor of the strong regime on its own; equals 1 up to
// 1e-6 strictly inside the eigenvalue support.
inline double strong_boundary_factor(const EnsembleSpec& spec, int k,
                                     std::complex<double> x,
                                     const QuadratureSpec& q = {}) {
  const double mu = spec.mu();
  if (!(mu < 1.0))
    throw domain_error("strong_boundary_factor: requires mu in (0,1)");
  const double y = std::norm(x);
  const double s =
      std::sqrt(static_cast<double>(spec.m_trunc)) * (mu - y) /
      (mu * std::sqrt(1.0 - mu));
  return gbe_max_cdf(k, static_cast<int>(spec.beta_prime()), s, q);
}

// Leading-order weak-non-unitarity approximation at |x|^2 = 1 - 2u/M with
// kappa = N - M fixed, carrying the Laguerre-ensemble boundary factor.
inline double weak_approx(int beta, int kappa, int k, double u, int m_trunc,
                          const QuadratureSpec& q = {}) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw invalid_parameter("weak_approx: beta must be 1, 2 or 4");
  if (kappa < 0) throw invalid_parameter("weak_approx: kappa must be >= 0");
  if (k < 1) throw invalid_parameter("weak_approx: k must be >= 1");
  if (!(u > 0.0)) throw invalid_parameter("weak_approx: u must be positive");
  if (m_trunc < 1) throw invalid_parameter("weak_approx: M must be >= 1");
  const double a = 2.0 / beta;

  double logv =
      (a * k * k + k * (1.0 - a)) * std::log(m_trunc / (2.0 * u));
  for (int j = 0; j < k; ++j)
    logv += log_gamma(kappa + 1.0 + a * j) - log_gamma(1.0 + a * j);
  logv -= k * kappa * std::log(2.0 * u);

  const double cdf = lbe_max_cdf(k, static_cast<int>(4.0 / beta), kappa, u, q);
  return std::exp(logv) * cdf;
}

// CLT coefficients for log|det(e^{i theta} I - A)|.
inline CLTParams clt_params_boundary(int beta, CLTRegime regime,
                                     std::optional<double> mu_tilde = {}) {
  CLTParams p;
  p.e_beta = detail::e_coefficient(beta);
  p.v_beta = detail::v_coefficient(beta);
  p.regime = regime;
  switch (regime) {
    case CLTRegime::weak:
      p.mean = 0.0;
      p.variance = 1.0;
      return p;
    case CLTRegime::strong: {
      if (!mu_tilde || !(*mu_tilde > 0.0) || !(*mu_tilde < 1.0))
        throw domain_error(
            "clt_params_boundary: strong regime needs mu_tilde in (0,1)");
      const double l = std::log(1.0 - *mu_tilde);
      p.mean = -p.e_beta * l;
      p.variance = -p.v_beta * l;
      return p;
    }
    case CLTRegime::origin_strong:
      throw invalid_parameter(
          "clt_params_boundary: origin regime is served by clt_params_origin");
  }
  throw invalid_parameter("clt_params_boundary: unknown regime");
}

// Centering and scaling of the origin law for log|det A| in the strong
// regime. The O(1) term of the centering is omitted. e_beta and v_beta hold
// the log M coefficients of centering and variance.
inline CLTParams clt_params_origin(const EnsembleSpec& spec) {
  const double mu = spec.mu();
  if (!(mu > 0.0) || !(mu < 1.0))
    throw domain_error("clt_params_origin: requires mu = M/N in (0,1)");
  const double m = spec.m_trunc;
  CLTParams p;
  p.regime = CLTRegime::origin_strong;
  p.e_beta = 0.25 * (2.0 / spec.beta - 1.0);
  p.v_beta = 1.0 / (2.0 * spec.beta);
  p.mean = 0.5 * m * std::log(mu * std::pow(1.0 - mu, 1.0 / mu - 1.0)) +
           p.e_beta * std::log(m);
  p.variance = p.v_beta * std::log(m);
  return p;
}

}  // namespace truncmom
