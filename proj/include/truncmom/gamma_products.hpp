#pragma once

#include <cmath>
#include <vector>

#include "truncmom/common.hpp"
#include "truncmom/ensemble.hpp"
#include "truncmom/special_functions.hpp"

namespace truncmom {

// A positive quantity carried on the natural-log scale. Every closed-form
// moment in this module is a product of Gamma ratios, so exponentiation is
// deferred to callers to avoid overflow at large N.
struct GammaProduct {
  double log_value = 0.0;
  int sign = +1;  // all products here are positive

  double value() const { return std::exp(log_value); }
};

namespace detail {

inline constexpr double kThetaTol = 1e-9;

inline bool theta_is_zero_or_pi(double theta) {
  const double two_pi = 2.0 * M_PI;
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  return std::abs(t) < kThetaTol || std::abs(t - M_PI) < kThetaTol ||
         std::abs(t - two_pi) < kThetaTol;
}

}  // namespace detail

// Selberg's integral S_m(a, b, lambda) over [0,1]^m with weight
// prod y_j^a (1-y_j)^b |Delta(y)|^lambda, as a product of Gamma ratios.
inline GammaProduct selberg_log(int m, double a, double b, double lambda) {
  if (m < 0) throw invalid_parameter("selberg_log: m must be >= 0");
  if (!(a > -1.0) || !(b > -1.0))
    throw invalid_parameter("selberg_log: requires a > -1 and b > -1");
  if (!(lambda >= 0.0))
    throw invalid_parameter("selberg_log: requires lambda >= 0");
  const double h = lambda / 2.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(m) * 5);
  for (int j = 0; j < m; ++j) {
    terms.push_back(log_gamma(a + 1.0 + j * h));
    terms.push_back(log_gamma(b + 1.0 + j * h));
    terms.push_back(log_gamma(1.0 + (j + 1) * h));
    terms.push_back(-log_gamma(a + b + 2.0 + (m + j - 1) * h));
    terms.push_back(-log_gamma(1.0 + h));
  }
  return {pairwise_sum(terms), +1};
}

// Normalization constant S_{k,N}(beta) of the duality integral. Equals the
// Selberg constant with parameters (k, N, 0, 4/beta).
inline GammaProduct skn_log(int k, int n_total, int beta) {
  if (k < 1) throw invalid_parameter("skn_log: k must be >= 1");
  if (n_total < 1) throw invalid_parameter("skn_log: N must be >= 1");
  if (beta != 1 && beta != 2 && beta != 4)
    throw invalid_parameter("skn_log: beta must be 1, 2 or 4");
  const double a = 2.0 / beta;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(k) * 5);
  for (int j = 0; j < k; ++j) {
    terms.push_back(log_gamma(n_total + 1.0 + j * a));
    terms.push_back(log_gamma(1.0 + j * a));
    terms.push_back(log_gamma(1.0 + (j + 1) * a));
    terms.push_back(-log_gamma(n_total + 2.0 + (k + j - 1) * a));
    terms.push_back(-log_gamma(1.0 + a));
  }
  return {pairwise_sum(terms), +1};
}

// Moments of the characteristic polynomial on the unit circle,
// E det(e^{i theta} I - A)^gamma in the ensemble's natural representation:
//   beta=1: det(...)^gamma with theta in {0, pi},
//   beta=2: |det(...)|^gamma,
//   beta=4: the 2M x 2M complex-representation determinant to the power gamma.
// The products are theta-free; theta enters only the admissibility check.
inline GammaProduct boundary_moment(const EnsembleSpec& spec, double gamma,
                                    double theta = 0.0) {
  if (gamma == 0.0) return {0.0, +1};
  if (spec.beta == 2) {
    if (!(gamma > -1.0))
      throw domain_error("boundary_moment: beta=2 requires gamma > -1");
  } else {
    if (!(gamma > 0.0))
      throw domain_error("boundary_moment: beta in {1,4} requires gamma > 0");
  }
  if (spec.beta == 1 && !detail::theta_is_zero_or_pi(theta))
    throw domain_error("boundary_moment: beta=1 requires theta in {0, pi}");

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(spec.m_trunc) * 4);
  for (int j = spec.kappa() + 1; j <= spec.n_total; ++j) {
    switch (spec.beta) {
      case 1:
        terms.push_back(log_gamma(0.5 * j));
        terms.push_back(log_gamma(0.5 * (j - 1) + gamma));
        terms.push_back(-log_gamma(0.5 * j + 0.5 * gamma));
        terms.push_back(-log_gamma(0.5 * (j - 1) + 0.5 * gamma));
        break;
      case 2:
        terms.push_back(log_gamma(j));
        terms.push_back(log_gamma(j + gamma));
        terms.push_back(-2.0 * log_gamma(j + 0.5 * gamma));
        break;
      case 4:
        terms.push_back(log_gamma(2.0 * j));
        terms.push_back(log_gamma(2.0 * j + 2.0 * gamma + 1.0));
        terms.push_back(-log_gamma(2.0 * j + gamma));
        terms.push_back(-log_gamma(2.0 * j + gamma + 1.0));
        break;
    }
  }
  return {pairwise_sum(terms), +1};
}

// Exponent for which boundary_moment reproduces R_{2k} on the unit circle.
// R_{2k} raises the natural-representation determinant to the power 2k for
// beta in {1,2} but k for beta=4 (the representation already squares sizes).
inline double boundary_gamma_for_r2k(int beta, int k) {
  return beta == 4 ? static_cast<double>(k) : 2.0 * static_cast<double>(k);
}

enum class HaarGroup { U, SO_even, Sp, O_even };

// Moments of characteristic polynomials over full classical groups:
//   U:       E_{U(n)}  |det(e^{i theta} I_n - U)|^gamma,  gamma > -1
//   SO_even: E_{SO(2n)} det(I_{2n} - U)^gamma,            gamma > 0
//   Sp:      E_{Sp(2n)} det(e^{i theta} I_n - U)^gamma,   gamma > 0
//   O_even:  half the SO(2n) value; undefined at gamma = 0.
inline GammaProduct haar_group_moment(HaarGroup group, int n, double gamma) {
  if (n < 1) throw invalid_parameter("haar_group_moment: n must be >= 1");
  std::vector<double> terms;
  switch (group) {
    case HaarGroup::U: {
      if (gamma == 0.0) return {0.0, +1};
      if (!(gamma > -1.0))
        throw domain_error("haar_group_moment: U requires gamma > -1");
      for (int j = 1; j <= n; ++j) {
        terms.push_back(log_gamma(j));
        terms.push_back(log_gamma(j + gamma));
        terms.push_back(-2.0 * log_gamma(j + 0.5 * gamma));
      }
      break;
    }
    case HaarGroup::SO_even: {
      if (gamma == 0.0) return {0.0, +1};
      if (!(gamma > 0.0))
        throw domain_error("haar_group_moment: SO_even requires gamma > 0");
      terms.push_back(2.0 * n * gamma * std::log(2.0));
      for (int j = 1; j <= n; ++j) {
        terms.push_back(log_gamma(n - 1.0 + j));
        terms.push_back(log_gamma(gamma - 0.5 + j));
        terms.push_back(-log_gamma(-0.5 + j));
        terms.push_back(-log_gamma(n - 1.0 + gamma + j));
      }
      break;
    }
    case HaarGroup::Sp: {
      if (gamma == 0.0) return {0.0, +1};
      if (!(gamma > 0.0))
        throw domain_error("haar_group_moment: Sp requires gamma > 0");
      terms.push_back(2.0 * n * gamma * std::log(2.0));
      for (int j = 1; j <= n; ++j) {
        terms.push_back(log_gamma(1.0 + n + j));
        terms.push_back(log_gamma(0.5 + gamma + j));
        terms.push_back(-log_gamma(0.5 + j));
        terms.push_back(-log_gamma(1.0 + gamma + n + j));
      }
      break;
    }
    case HaarGroup::O_even: {
      // Haar on O(2n) splits evenly between SO(2n) and the reflection coset,
      // whose elements have the fixed eigenvalues +-1 and contribute nothing
      // for gamma > 0. The relation degenerates at gamma = 0.
      if (!(gamma > 0.0))
        throw domain_error("haar_group_moment: O_even requires gamma > 0");
      GammaProduct so = haar_group_moment(HaarGroup::SO_even, n, gamma);
      return {so.log_value - std::log(2.0), +1};
    }
  }
  return {pairwise_sum(terms), +1};
}

// Moment generating function of log|det A|: E|det A|^gamma as the M-fold
// Gamma product (|det A| is the half-power of the 2M x 2M representation
// determinant when beta=4). Valid for gamma > -beta.
inline GammaProduct logdet_mgf(const EnsembleSpec& spec, double gamma) {
  if (gamma == 0.0) return {0.0, +1};
  const double hb = 0.5 * spec.beta;
  const double hg = 0.5 * gamma;
  if (!(hg + hb > 0.0))
    throw domain_error("logdet_mgf: requires gamma > -beta (Gamma pole)");
  const double kap = spec.kappa();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(spec.m_trunc) * 4);
  for (int j = 0; j < spec.m_trunc; ++j) {
    terms.push_back(log_gamma(hg + hb * (1.0 + j)));
    terms.push_back(log_gamma(hb * (kap + 1.0 + j)));
    terms.push_back(-log_gamma(hb * (1.0 + j)));
    terms.push_back(-log_gamma(hb * (kap + 1.0 + j) + hg));
  }
  return {pairwise_sum(terms), +1};
}

// The kappa-fold rearrangement of the same MGF; must agree with logdet_mgf
// for all admissible parameters.
inline GammaProduct logdet_mgf_rearranged(const EnsembleSpec& spec,
                                          double gamma) {
  if (gamma == 0.0) return {0.0, +1};
  const double hb = 0.5 * spec.beta;
  const double hg = 0.5 * gamma;
  if (!(hg + hb > 0.0))
    throw domain_error("logdet_mgf: requires gamma > -beta (Gamma pole)");
  const int m = spec.m_trunc;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(spec.kappa()) * 4);
  for (int j = 0; j < spec.kappa(); ++j) {
    terms.push_back(log_gamma(hb * (m + 1.0 + j)));
    terms.push_back(log_gamma(hg + hb * (1.0 + j)));
    terms.push_back(-log_gamma(hb * (1.0 + j)));
    terms.push_back(-log_gamma(hg + hb * (m + 1.0 + j)));
  }
  return {pairwise_sum(terms), +1};
}

// Cumulants of log|det A| (at_boundary = false) or of
// log|det(e^{i theta} I - A)| (at_boundary = true), obtained by analytic
// polygamma differentiation of the log-MGF. Orders 1..3.
inline double logdet_cumulant(const EnsembleSpec& spec, int order,
                              bool at_boundary) {
  if (order < 1 || order > 3)
    throw invalid_parameter("logdet_cumulant: order must be in {1,2,3}");
  const int n = order - 1;  // polygamma index
  std::vector<double> terms;

  if (!at_boundary) {
    const double hb = 0.5 * spec.beta;
    const double kap = spec.kappa();
    const double scale = std::pow(0.5, order);
    terms.reserve(spec.m_trunc);
    for (int j = 0; j < spec.m_trunc; ++j) {
      terms.push_back(scale * (polygamma(n, hb * (1.0 + j)) -
                               polygamma(n, hb * (kap + 1.0 + j))));
    }
    return pairwise_sum(terms);
  }

  // Boundary case via the ratio form of the Haar decomposition: the log-MGF
  // is a sum over j = kappa+1 .. N of per-beta log-Gamma combinations.
  if (spec.beta == 1 && spec.kappa() == 0)
    throw domain_error(
        "logdet_cumulant: beta=1 boundary cumulants diverge at M=N "
        "(det(I-A) vanishes with positive probability)");
  terms.reserve(spec.m_trunc);
  const double half_pow = std::pow(0.5, order);
  for (int j = spec.kappa() + 1; j <= spec.n_total; ++j) {
    double t = 0.0;
    switch (spec.beta) {
      case 1:
        t = polygamma(n, 0.5 * (j - 1)) -
            half_pow * (polygamma(n, 0.5 * j) + polygamma(n, 0.5 * (j - 1)));
        break;
      case 2:
        t = (1.0 - 2.0 * half_pow) * polygamma(n, j);
        break;
      case 4:
        t = std::pow(2.0, order) * polygamma(n, 2.0 * j + 1.0) -
            polygamma(n, 2.0 * j) - polygamma(n, 2.0 * j + 1.0);
        break;
    }
    terms.push_back(t);
  }
  return pairwise_sum(terms);
}

// Normalization of the Gaussian Selberg-type integral
// int_{R^k} prod e^{-t^2/2} |Delta|^{beta'} dt, written with c = beta'/2.
inline GammaProduct gaussian_selberg_log(int k, double beta_prime) {
  if (k < 1) throw invalid_parameter("gaussian_selberg_log: k must be >= 1");
  if (!(beta_prime > 0))
    throw invalid_parameter("gaussian_selberg_log: beta' must be positive");
  const double c = 0.5 * beta_prime;
  std::vector<double> terms;
  terms.push_back(0.5 * k * std::log(2.0 * M_PI));
  for (int j = 1; j <= k; ++j)
    terms.push_back(log_gamma(1.0 + j * c) - log_gamma(1.0 + c));
  return {pairwise_sum(terms), +1};
}

// Normalization of the Laguerre Selberg-type integral
// int_{[0,inf)^k} prod e^{-t} t^kappa |Delta|^{beta'} dt.
inline GammaProduct laguerre_selberg_log(int k, int kappa, double beta_prime) {
  if (k < 1) throw invalid_parameter("laguerre_selberg_log: k must be >= 1");
  if (kappa < 0)
    throw invalid_parameter("laguerre_selberg_log: kappa must be >= 0");
  if (!(beta_prime > 0))
    throw invalid_parameter("laguerre_selberg_log: beta' must be positive");
  const double c = 0.5 * beta_prime;
  std::vector<double> terms;
  for (int j = 0; j < k; ++j) {
    terms.push_back(log_gamma(1.0 + (j + 1) * c));
    terms.push_back(log_gamma(kappa + 1.0 + j * c));
    terms.push_back(-log_gamma(1.0 + c));
  }
  return {pairwise_sum(terms), +1};
}

// MGF of the limit law (1/2) sum_{j<kappa} log Gamma_j^{(beta)} of the shifted
// log-determinant, where Gamma_j has shape beta/2 + beta j/2.
inline GammaProduct gamma_limit_mgf(int kappa, int beta, double gamma) {
  if (kappa < 0) throw invalid_parameter("gamma_limit_mgf: kappa must be >= 0");
  if (beta != 1 && beta != 2 && beta != 4)
    throw invalid_parameter("gamma_limit_mgf: beta must be 1, 2 or 4");
  if (kappa == 0 || gamma == 0.0) return {0.0, +1};
  const double hb = 0.5 * beta;
  if (!(hb + 0.5 * gamma > 0.0))
    throw domain_error("gamma_limit_mgf: Gamma pole (gamma <= -beta)");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(kappa) * 2);
  for (int j = 0; j < kappa; ++j) {
    terms.push_back(log_gamma(hb + hb * j + 0.5 * gamma));
    terms.push_back(-log_gamma(hb + hb * j));
  }
  return {pairwise_sum(terms), +1};
}

}  // namespace truncmom
