#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "truncmom/common.hpp"
#include "truncmom/ensemble.hpp"
#include "truncmom/gamma_products.hpp"
#include "truncmom/rng.hpp"

namespace truncmom {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// Golub-Welsch for the Jacobi weight (1-x)^A (1+x)^B on [-1,1].
inline QuadratureRule gauss_jacobi_reference(int n, double A, double B) {
  if (n < 1) throw invalid_parameter("quadrature: need at least one node");
  Eigen::VectorXd diag(n), sub(std::max(0, n - 1));
  for (int j = 0; j < n; ++j) {
    const double s = 2.0 * j + A + B;
    diag[j] = (j == 0) ? (B - A) / (A + B + 2.0)
                       : (B * B - A * A) / (s * (s + 2.0));
  }
  for (int j = 1; j < n; ++j) {
    const double s = 2.0 * j + A + B;
    double b2;
    if (j == 1) {
      b2 = 4.0 * (A + 1.0) * (B + 1.0) / ((A + B + 2.0) * (A + B + 2.0) * (A + B + 3.0));
    } else {
      b2 = 4.0 * j * (j + A) * (j + B) * (j + A + B) /
           (s * s * (s + 1.0) * (s - 1.0));
    }
    sub[j - 1] = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  // Total mass on the log scale; large B would overflow 2^{A+B+1} directly.
  const double log_mu0 = (A + B + 1.0) * std::log(2.0) + log_gamma(A + 1.0) +
                         log_gamma(B + 1.0) - log_gamma(A + B + 2.0);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = std::exp(log_mu0 + std::log(v0 * v0));
  }
  return rule;
}

}  // namespace detail

// Nodes and weights such that int_0^1 t^b f(t) dt ~= sum w_i f(t_i).
inline QuadratureRule gauss_jacobi_01(int n, double b_exp) {
  if (!(b_exp > -1.0))
    throw invalid_parameter("gauss_jacobi_01: exponent must exceed -1");
  QuadratureRule ref = detail::gauss_jacobi_reference(n, 0.0, b_exp);
  const double scale = std::exp(-(b_exp + 1.0) * std::log(2.0));
  for (int i = 0; i < n; ++i) {
    ref.nodes[i] = 0.5 * (ref.nodes[i] + 1.0);
    ref.weights[i] *= scale;
  }
  return ref;
}

// Plain Gauss-Legendre on [lo, hi].
inline QuadratureRule gauss_legendre(int n, double lo = 0.0, double hi = 1.0) {
  QuadratureRule ref = detail::gauss_jacobi_reference(n, 0.0, 0.0);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    ref.nodes[i] = mid + half * ref.nodes[i];
    ref.weights[i] *= half;
  }
  return ref;
}

enum class QuadRuleKind { gauss_jacobi, gauss_legendre, ordered_simplex_mc };

// Knobs for the k-fold integration engines. nodes_per_dim = 0 lets each
// operation pick the smallest count that is polynomially exact (or a
// spectrally converged default for the CDF integrals).
struct QuadratureSpec {
  int nodes_per_dim = 0;
  QuadRuleKind rule = QuadRuleKind::gauss_jacobi;
  long mc_samples = 200000;
  double domain_cut = 12.0;  // truncation for unbounded Gaussian domains
  std::uint64_t mc_seed = 0x5eedULL;
};

struct QuadResult {
  double value = 0.0;
  double stderr_est = 0.0;  // zero for the deterministic rules
  bool stochastic = false;
};

namespace detail {

// Sum of f over the tensor grid, traversed in odometer order so that the
// reduction order is fixed by node index.
template <typename F>
double tensor_sum(const QuadratureRule& rule, int k, F&& f) {
  const int n = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(k, 0);
  std::vector<double> t(k);
  double acc = 0.0;
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < k; ++i) {
      t[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    acc += w * f(std::span<const double>(t));
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return acc;
}

inline double vandermonde_power(std::span<const double> t, int beta_prime) {
  double v = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      const double d = t[j] - t[i];
      switch (beta_prime) {
        case 1: v *= std::abs(d); break;
        case 2: v *= d * d; break;
        case 4: v *= (d * d) * (d * d); break;
        default: v *= std::pow(std::abs(d), beta_prime);
      }
    }
  return v;
}

// Integral of f over the ordered region lo < t_1 < ... < t_k < hi by the
// nested substitution t_i = lo + (t_{i+1} - lo) u_i, which turns polynomial
// integrands into polynomials on the cube.
template <typename F>
double simplex_integrate(int k, double lo, double hi, int nodes, F&& f) {
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  std::vector<double> t(k);
  return tensor_sum(rule, k, [&](std::span<const double> u) {
    double jac = 1.0;
    double upper = hi;
    for (int i = k - 1; i >= 0; --i) {
      jac *= (upper - lo);
      t[i] = lo + (upper - lo) * u[i];
      upper = t[i];
    }
    return jac * f(std::span<const double>(t));
  });
}

// Stratified (per-coordinate Latin hypercube) Monte Carlo average of
// f(sorted uniforms) over independent batches; returns mean and stderr of
// E[f(T)] with T the ascending order statistics of k uniforms on [0,1].
template <typename F>
std::pair<double, double> ordered_mc(int k, long samples, std::uint64_t seed,
                                     F&& f) {
  constexpr int kBatches = 32;
  const long per_batch = std::max<long>(2, samples / kBatches);
  std::vector<double> batch_means(kBatches);
  std::vector<double> t(k);
  for (int b = 0; b < kBatches; ++b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b) + 1);
    // Latin hypercube: one random permutation of strata per coordinate.
    std::vector<std::vector<int>> strata(k, std::vector<int>(per_batch));
    for (int c = 0; c < k; ++c) {
      std::iota(strata[c].begin(), strata[c].end(), 0);
      for (long i = per_batch - 1; i > 0; --i) {
        const long j = static_cast<long>(rng.bits() % (i + 1));
        std::swap(strata[c][i], strata[c][j]);
      }
    }
    double acc = 0.0;
    for (long s = 0; s < per_batch; ++s) {
      for (int c = 0; c < k; ++c)
        t[c] = (strata[c][s] + rng.uniform()) / per_batch;
      std::sort(t.begin(), t.end());
      acc += f(std::span<const double>(t));
    }
    batch_means[b] = acc / per_batch;
  }
  const double mean = pairwise_sum(batch_means) / kBatches;
  double var = 0.0;
  for (double m : batch_means) var += (m - mean) * (m - mean);
  var /= kBatches * (kBatches - 1.0);
  return {mean, std::sqrt(var)};
}

inline int auto_nodes(int required, int requested, const char* what) {
  if (requested == 0) return required + 2;
  if (requested < required)
    throw invalid_parameter(std::string(what) +
                            ": nodes_per_dim too small for the declared "
                            "polynomial exactness (need >= " +
                            std::to_string(required) + ")");
  return requested;
}

// Shared k-fold engine for all duality-type integrands over [0,1]^k with the
// steep t^{N-M} factor, a per-coordinate polynomial `base`, and |Delta|^{b'}.
template <typename Base>
QuadResult duality_integral(const EnsembleSpec& spec, int k, int poly_degree,
                            const QuadratureSpec& q, Base&& base) {
  const int beta_prime = static_cast<int>(spec.beta_prime());
  const int kappa = spec.kappa();
  const double log_norm = skn_log(k, spec.n_total, spec.beta).log_value;

  const bool smooth_vdm = (beta_prime % 2 == 0) || k == 1;
  if (smooth_vdm && q.rule != QuadRuleKind::ordered_simplex_mc) {
    const int vdm_deg = beta_prime * (k - 1);
    QuadratureRule rule;
    const bool explicit_power = q.rule == QuadRuleKind::gauss_legendre;
    if (!explicit_power) {
      const int need = (poly_degree + vdm_deg + 2) / 2;
      rule = gauss_jacobi_01(auto_nodes(need, q.nodes_per_dim, "duality"),
                             static_cast<double>(kappa));
    } else {
      const int need = (kappa + poly_degree + vdm_deg + 2) / 2;
      rule = gauss_legendre(auto_nodes(need, q.nodes_per_dim, "duality"));
    }
    const double integral =
        tensor_sum(rule, k, [&](std::span<const double> t) {
          double v = vandermonde_power(t, beta_prime);
          for (double ti : t) {
            v *= base(ti);
            if (explicit_power) v *= std::pow(ti, kappa);
          }
          return v;
        });
    return {integral * std::exp(-log_norm), 0.0, false};
  }

  // beta' = 1 (beta = 4): |Delta| is smooth only on the ordered simplex.
  auto simplex_f = [&](std::span<const double> t) {
    double v = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) v *= (t[j] - t[i]);
      v *= base(t[i]) * std::pow(t[i], kappa);
    }
    return v;
  };
  if (k <= 3 && q.rule != QuadRuleKind::ordered_simplex_mc) {
    const int per_dim = k * (kappa + poly_degree + k - 1) + k;
    const int nodes = auto_nodes((per_dim + 2) / 2, q.nodes_per_dim,
                                 "duality(simplex)");
    const double ordered = simplex_integrate(k, 0.0, 1.0, nodes, simplex_f);
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return {fact * ordered * std::exp(-log_norm), 0.0, false};
  }

  // Ordered-simplex Monte Carlo; the k! density of the order statistics
  // cancels the symmetrization factor.
  auto [mean, se] = ordered_mc(k, q.mc_samples, q.mc_seed, simplex_f);
  const double scale = std::exp(-log_norm);
  return {mean * scale, se * scale, true};
}

}  // namespace detail

// Moment R^{(beta)}_{2k}(x) through the k-fold duality integral. For beta=1
// the evaluation point must be real.
inline QuadResult duality_moment(const EnsembleSpec& spec, int k,
                                 std::complex<double> x,
                                 const QuadratureSpec& q = {}) {
  if (k < 1) throw invalid_parameter("duality_moment: k must be >= 1");
  if (spec.beta == 1 && x.imag() != 0.0)
    throw domain_error("duality_moment: beta=1 requires real x");
  const double y = std::norm(x);
  const int m = spec.m_trunc;
  return detail::duality_integral(spec, k, m, q, [y, m](double t) {
    return std::pow(1.0 + (y - 1.0) * t, m);
  });
}

// General-Sigma duality: E of the moment with A replaced by AV, where
// sigma_eigs are the eigenvalues of Sigma = V V^dagger. Requires |x|^2 to
// stay away from every eigenvalue.
inline QuadResult duality_moment_general(const EnsembleSpec& spec, int k,
                                         std::complex<double> x,
                                         const std::vector<double>& sigma_eigs,
                                         const QuadratureSpec& q = {}) {
  if (k < 1)
    throw invalid_parameter("duality_moment_general: k must be >= 1");
  if (static_cast<int>(sigma_eigs.size()) != spec.m_trunc)
    throw invalid_parameter(
        "duality_moment_general: need exactly M eigenvalues of Sigma");
  if (spec.beta == 1 && x.imag() != 0.0)
    throw domain_error("duality_moment_general: beta=1 requires real x");
  const double y = std::norm(x);

  LogSigned pref = LogSigned::one();  // det(|x|^2 - Sigma)^k
  std::vector<double> gamma_shift(sigma_eigs.size());
  for (std::size_t j = 0; j < sigma_eigs.size(); ++j) {
    const double d = y - sigma_eigs[j];
    if (d == 0.0)
      throw domain_error(
          "duality_moment_general: |x|^2 coincides with a Sigma eigenvalue");
    for (int rep = 0; rep < k; ++rep) pref *= LogSigned::from_value(d);
    gamma_shift[j] = -sigma_eigs[j] / d;
  }

  QuadResult r = detail::duality_integral(
      spec, k, spec.m_trunc, q, [&gamma_shift](double t) {
        double v = 1.0;
        for (double g : gamma_shift) v *= (t - g);
        return v;
      });
  const double scale = pref.sign * std::exp(pref.log_abs);
  return {r.value * scale, r.stderr_est * std::abs(scale), r.stochastic};
}

// Odd moments E det(xI - AV)^{2k+1} for the real ensemble: a k-fold integral
// with weight (1-t)^2 and |Delta|^4, normalized by the Selberg constant
// S_k(N, 2, 4), carrying the x^M det(x^2 - Sigma)^k prefactor.
inline QuadResult odd_moment_real(const EnsembleSpec& spec, int k, double x,
                                  const std::vector<double>& sigma_eigs,
                                  const QuadratureSpec& q = {}) {
  if (spec.beta != 1)
    throw domain_error("odd_moment_real: only defined for beta = 1");
  if (k < 0) throw invalid_parameter("odd_moment_real: k must be >= 0");
  if (static_cast<int>(sigma_eigs.size()) != spec.m_trunc)
    throw invalid_parameter("odd_moment_real: need M eigenvalues of Sigma");
  const double y = x * x;

  LogSigned pref = LogSigned::from_value(x);
  if (pref.is_zero() && spec.m_trunc > 0) {
    // det(0 - AV)^{2k+1} has mean 0: the prefactor x^M annihilates the value.
    return {0.0, 0.0, false};
  }
  pref.log_abs *= spec.m_trunc;
  pref.sign = (spec.m_trunc % 2 == 0) ? 1 : pref.sign;
  std::vector<double> gamma_shift(sigma_eigs.size());
  for (std::size_t j = 0; j < sigma_eigs.size(); ++j) {
    const double d = y - sigma_eigs[j];
    if (d == 0.0)
      throw domain_error("odd_moment_real: x^2 coincides with a Sigma "
                         "eigenvalue");
    for (int rep = 0; rep < k; ++rep) pref *= LogSigned::from_value(d);
    gamma_shift[j] = -sigma_eigs[j] / d;
  }

  if (k == 0) {
    // Empty integral and S_0 = 1: the value is the prefactor itself.
    return {pref.value(), 0.0, false};
  }

  const int kappa = spec.kappa();
  const double log_norm =
      selberg_log(k, spec.n_total, 2.0, 4.0).log_value;
  const int need =
      (2 + spec.m_trunc + 4 * (k - 1) + 2) / 2 + 1;
  QuadratureRule rule = gauss_jacobi_01(
      detail::auto_nodes(need, q.nodes_per_dim, "odd_moment_real"),
      static_cast<double>(kappa));
  const double integral =
      detail::tensor_sum(rule, k, [&](std::span<const double> t) {
        double v = detail::vandermonde_power(t, 4);
        for (double ti : t) {
          const double om = 1.0 - ti;
          double b = om * om;
          for (double g : gamma_shift) b *= (ti - g);
          v *= b;
        }
        return v;
      });
  return {pref.value() * integral * std::exp(-log_norm), 0.0, false};
}

// P(largest eigenvalue of the k x k Gaussian beta'-ensemble < s), evaluated
// by quadrature of the Selberg-weighted integral truncated at -domain_cut.
inline double gbe_max_cdf(int k, int beta_prime, double s,
                          const QuadratureSpec& q = {}) {
  if (k < 1) throw invalid_parameter("gbe_max_cdf: k must be >= 1");
  if (beta_prime != 1 && beta_prime != 2 && beta_prime != 4)
    throw invalid_parameter("gbe_max_cdf: beta' must be 1, 2 or 4");
  const double lo = -q.domain_cut;
  if (s <= lo) return 0.0;
  const double hi = std::min(s, q.domain_cut);
  const double log_norm = gaussian_selberg_log(k, beta_prime).log_value;
  const int nodes = q.nodes_per_dim > 0 ? q.nodes_per_dim : 64;

  auto weight = [](double t) { return std::exp(-0.5 * t * t); };
  double integral;
  if (beta_prime % 2 == 0 || k == 1) {
    const QuadratureRule rule = gauss_legendre(nodes, lo, hi);
    integral = detail::tensor_sum(rule, k, [&](std::span<const double> t) {
      double v = detail::vandermonde_power(t, beta_prime);
      for (double ti : t) v *= weight(ti);
      return v;
    });
  } else {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    integral = fact * detail::simplex_integrate(
                          k, lo, hi, nodes, [&](std::span<const double> t) {
                            double v = 1.0;
                            for (std::size_t i = 0; i < t.size(); ++i) {
                              for (std::size_t j = i + 1; j < t.size(); ++j)
                                v *= (t[j] - t[i]);
                              v *= weight(t[i]);
                            }
                            return v;
                          });
  }
  return std::clamp(integral * std::exp(-log_norm), 0.0, 1.0);
}

// P(largest eigenvalue of the k x k Laguerre beta'-ensemble with parameter
// kappa < 2u).
inline double lbe_max_cdf(int k, int beta_prime, int kappa, double u,
                          const QuadratureSpec& q = {}) {
  if (k < 1) throw invalid_parameter("lbe_max_cdf: k must be >= 1");
  if (beta_prime != 1 && beta_prime != 2 && beta_prime != 4)
    throw invalid_parameter("lbe_max_cdf: beta' must be 1, 2 or 4");
  if (kappa < 0) throw invalid_parameter("lbe_max_cdf: kappa must be >= 0");
  if (!(u > 0.0)) throw invalid_parameter("lbe_max_cdf: u must be positive");

  const double hard_cut = std::max(64.0, 5.0 * kappa);
  const double hi = std::min(2.0 * u, hard_cut);
  const double log_norm =
      laguerre_selberg_log(k, kappa, beta_prime).log_value;
  const int nodes = q.nodes_per_dim > 0
                        ? q.nodes_per_dim
                        : std::max(48, static_cast<int>(hi) + 16);

  auto weight = [kappa](double t) {
    return std::exp(-t) * std::pow(t, kappa);
  };
  double integral;
  if (beta_prime % 2 == 0 || k == 1) {
    const QuadratureRule rule = gauss_legendre(nodes, 0.0, hi);
    integral = detail::tensor_sum(rule, k, [&](std::span<const double> t) {
      double v = detail::vandermonde_power(t, beta_prime);
      for (double ti : t) v *= weight(ti);
      return v;
    });
  } else {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    integral = fact * detail::simplex_integrate(
                          k, 0.0, hi, nodes, [&](std::span<const double> t) {
                            double v = 1.0;
                            for (std::size_t i = 0; i < t.size(); ++i) {
                              for (std::size_t j = i + 1; j < t.size(); ++j)
                                v *= (t[j] - t[i]);
                              v *= weight(t[i]);
                            }
                            return v;
                          });
  }
  return std::clamp(integral * std::exp(-log_norm), 0.0, 1.0);
}

}  // namespace truncmom
