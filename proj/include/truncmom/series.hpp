#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "truncmom/common.hpp"
#include "truncmom/ensemble.hpp"
#include "truncmom/gamma_products.hpp"
#include "truncmom/jack.hpp"
#include "truncmom/partitions.hpp"

namespace truncmom {

// R^{(beta)}_{2k}(x) as an exact polynomial in y = |x|^2 (y = x^2 for beta=1).
// Degree is k*M and the leading coefficient is 1.
struct SeriesPolynomial {
  EnsembleSpec spec;
  int k;
  std::vector<double> coeffs;  // coeffs[p] multiplies y^p

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double evaluate_y(double y) const {
    double acc = 0.0;
    for (int p = degree(); p >= 0; --p) acc = acc * y + coeffs[p];
    return acc;
  }

  // Evaluation conventions of the moment definition: beta=1 takes real x and
  // uses y = x^2; beta in {2,4} depend on x only through y = |x|^2.
  double evaluate(std::complex<double> x) const {
    if (spec.beta == 1 && x.imag() != 0.0)
      throw domain_error("SeriesPolynomial: beta=1 requires real x");
    return evaluate_y(std::norm(x));
  }
};

namespace detail {

// One series term: the Pochhammer ratio times the Jack value at the identity,
// divided by |nu|!, assembled from log magnitudes and signs.
inline LogSigned series_term(const Partition& nu, double a1, double a2,
                             double c, double alpha, int m) {
  LogSigned t = gen_pochhammer_log(a1, alpha, nu);
  if (t.is_zero()) return t;
  t *= gen_pochhammer_log(a2, alpha, nu);
  if (t.is_zero()) return t;
  const LogSigned jv = jack_at_identity_log(nu, alpha, m);
  if (jv.is_zero()) return LogSigned::zero();
  t *= jv;
  LogSigned den = gen_pochhammer_log(c, alpha, nu);
  t /= den;
  t.log_abs -= log_gamma(nu.weight() + 1.0);
  return t;
}

}  // namespace detail

// Exact even moments from the terminating hypergeometric series at a scalar
// matrix argument. `max_part_window` widens the enumeration window past the
// natural termination bound k; the extra rows contribute exact zeros (this is
// exercised by tests, callers never need it).
inline SeriesPolynomial exact_moment(const EnsembleSpec& spec, int k,
                                     int max_part_window = 0) {
  if (k < 0) throw invalid_parameter("exact_moment: k must be >= 0");
  const int m = spec.m_trunc;
  const double alpha = spec.alpha();
  const double a1 = -static_cast<double>(k);
  const double a2 = -static_cast<double>(k) + 1.0 - 0.5 * spec.beta;
  const double c = 0.5 * spec.beta * spec.n_total;
  const int window = max_part_window == 0 ? k : max_part_window;

  const int deg = k * m;
  std::vector<CompensatedSum> acc(deg + 1);
  PartitionEnumerator en(window, m);
  while (auto nu = en.next()) {
    const LogSigned t = detail::series_term(*nu, a1, a2, c, alpha, m);
    if (t.is_zero()) continue;
    acc[deg - nu->weight()].add(t.value());
  }

  SeriesPolynomial out{spec, k, std::vector<double>(deg + 1)};
  for (int p = 0; p <= deg; ++p) out.coeffs[p] = acc[p].value();
  return out;
}

// Partial sum of the non-terminating series for a real moment exponent, valid
// for |x| > 1 where the scalar argument 1/|x|^2 lies inside the unit disc.
struct TailedValue {
  double value = 0.0;       // partial sum through the weight cap
  double tail = 0.0;        // geometric estimate of the discarded remainder
  bool converged = true;    // false when the shell ratio reached >= 1
  int weight_cap = 0;
};

inline TailedValue noninteger_moment(const EnsembleSpec& spec, double gamma,
                                     double x_mod, int weight_cap = 60) {
  if (!(x_mod > 1.0))
    throw domain_error(
        "noninteger_moment: requires |x| > 1 for series convergence");
  if (!(gamma > -1.0))
    throw domain_error("noninteger_moment: requires gamma > -1");
  if (weight_cap < 2)
    throw invalid_parameter("noninteger_moment: weight_cap must be >= 2");

  const int m = spec.m_trunc;
  const double alpha = spec.alpha();
  const double a1 = -0.5 * gamma;
  const double a2 = -0.5 * gamma + 1.0 - 0.5 * spec.beta;
  const double c = 0.5 * spec.beta * spec.n_total;
  const double log_z = -2.0 * std::log(x_mod);

  std::vector<double> shell(weight_cap + 1, 0.0);
  for (int w = 0; w <= weight_cap; ++w) {
    CompensatedSum s;
    for_each_partition_of_weight(w, m, [&](const Partition& nu) {
      const LogSigned t = detail::series_term(nu, a1, a2, c, alpha, m);
      if (t.is_zero()) return;
      s.add(t.sign * std::exp(t.log_abs + w * log_z));
    });
    shell[w] = s.value();
  }

  CompensatedSum total;
  for (double v : shell) total.add(v);
  const double prefactor = std::exp(gamma * m * std::log(x_mod));

  TailedValue out;
  out.weight_cap = weight_cap;
  const double last = std::abs(shell[weight_cap]);
  const double prev = std::abs(shell[weight_cap - 1]);
  if (last == 0.0) {
    out.tail = 0.0;
  } else if (prev > 0.0 && last < prev) {
    const double r = last / prev;
    out.tail = prefactor * last * r / (1.0 - r);
  } else {
    out.converged = false;  // shell ratio >= 1: outside the safe regime
    out.tail = std::numeric_limits<double>::infinity();
  }
  out.value = prefactor * total.value();
  return out;
}

}  // namespace truncmom
