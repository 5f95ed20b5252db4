#pragma once

#include <cmath>
#include <vector>

#include "truncmom/common.hpp"
#include "truncmom/partitions.hpp"
#include "truncmom/special_functions.hpp"

namespace truncmom {

// Generalised Pochhammer symbol [u]^{(alpha)}_nu: the product over rows
// j = 1..len(nu) of the classical rising factorials (u - (j-1)/alpha)_{nu_j}.
// Rows beyond the length contribute empty factors. Zeros arising from Gamma
// poles are legitimate values, so everything is computed as a plain product.
inline double gen_pochhammer(double u, double alpha, const Partition& nu) {
  if (!(alpha > 0.0))
    throw invalid_parameter("gen_pochhammer: alpha must be positive");
  double prod = 1.0;
  for (int j = 1; j <= nu.length(); ++j) {
    const double base = u - (j - 1) / alpha;
    for (int i = 0; i < nu.part(j); ++i) prod *= base + i;
  }
  return prod;
}

// Same value carried as (sign, log magnitude); required inside the series
// engines where row products overflow a plain double.
inline LogSigned gen_pochhammer_log(double u, double alpha,
                                    const Partition& nu) {
  if (!(alpha > 0.0))
    throw invalid_parameter("gen_pochhammer: alpha must be positive");
  LogSigned out = LogSigned::one();
  for (int j = 1; j <= nu.length(); ++j) {
    const double base = u - (j - 1) / alpha;
    for (int i = 0; i < nu.part(j); ++i) {
      const double f = base + i;
      if (f == 0.0) return LogSigned::zero();
      out.log_abs += std::log(std::abs(f));
      if (f < 0) out.sign = -out.sign;
    }
  }
  return out;
}

namespace detail {

// Arm a(i,j) = nu_i - j and leg l(i,j) = nu'_j - i of a box of the diagram.
// The two deformed hook products below normalize the Jack family.
inline double log_hook_product_lower(const Partition& nu, double alpha) {
  const Partition conj = nu.conjugate();
  double acc = 0.0;
  for (int i = 1; i <= nu.length(); ++i)
    for (int j = 1; j <= nu.part(i); ++j)
      acc += std::log(alpha * (nu.part(i) - j) + (conj.part(j) - i) + 1.0);
  return acc;
}

inline double log_hook_product_upper(const Partition& nu, double alpha) {
  const Partition conj = nu.conjugate();
  double acc = 0.0;
  for (int i = 1; i <= nu.length(); ++i)
    for (int j = 1; j <= nu.part(i); ++j)
      acc += std::log(alpha * (nu.part(i) - j + 1.0) + (conj.part(j) - i));
  return acc;
}

// log of a rising factorial with fractional increment,
// (u)_h = Gamma(u+h)/Gamma(u) for u > 0.
inline double log_poch_frac(double u, double h) {
  return log_gamma(u + h) - log_gamma(u);
}

}  // namespace detail

// The normalization d'_nu of the Jack polynomial family,
//   d'_nu = alpha^{|nu|} [(m-1)/alpha + 1]^{(alpha)}_nu / fbar^{1/alpha}(nu),
// computed at an internal padding size m >= len(nu). The value is independent
// of the padding; tests exercise this. padding = 0 selects len(nu) + 1.
inline double jack_dprime(const Partition& nu, double alpha, int padding = 0) {
  if (!(alpha > 0.0))
    throw invalid_parameter("jack_dprime: alpha must be positive");
  const int m = padding == 0 ? nu.length() + 1 : padding;
  if (m < nu.length())
    throw invalid_parameter("jack_dprime: padding must be >= len(nu)");

  const double top = gen_pochhammer((m - 1) / alpha + 1.0, alpha, nu);
  double log_fbar = 0.0;
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const double base = 1.0 + (j - i - 1) / alpha;
      log_fbar += detail::log_poch_frac(base + nu.part(i) - nu.part(j),
                                        1.0 / alpha) -
                  detail::log_poch_frac(base, 1.0 / alpha);
    }
  }
  return std::pow(alpha, nu.weight()) * top * std::exp(-log_fbar);
}

// C^{(alpha)}_nu(1^m): the normalised Jack polynomial at the identity.
// Vanishes when the diagram has more rows than variables.
inline LogSigned jack_at_identity_log(const Partition& nu, double alpha,
                                      int m) {
  if (!(alpha > 0.0))
    throw invalid_parameter("jack_at_identity: alpha must be positive");
  if (m < 0) throw invalid_parameter("jack_at_identity: m must be >= 0");
  if (nu.length() > m) return LogSigned::zero();
  if (nu.empty()) return LogSigned::one();

  // P_nu(1^m) = prod_{(i,j)} (m - (i-1) + alpha (j-1)) / c_nu(alpha), and
  // C = alpha^{|nu|} |nu|! P / c'_nu(alpha); all factors positive for m >= len.
  double log_num = 0.0;
  for (int i = 1; i <= nu.length(); ++i)
    for (int j = 1; j <= nu.part(i); ++j)
      log_num += std::log(m - (i - 1) + alpha * (j - 1));

  const double log_c = detail::log_hook_product_lower(nu, alpha);
  const double log_cp = detail::log_hook_product_upper(nu, alpha);
  const double w = nu.weight();
  return {w * std::log(alpha) + log_gamma(w + 1.0) + log_num - log_c - log_cp,
          +1};
}

inline double jack_at_identity(const Partition& nu, double alpha, int m) {
  return jack_at_identity_log(nu, alpha, m).value();
}

}  // namespace truncmom
