#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

#include "truncmom/common.hpp"
#include "truncmom/ensemble.hpp"
#include "truncmom/rng.hpp"

namespace truncmom {

// A Haar-distributed group element in its complex matrix representation:
// N x N real-valued for beta=1, N x N complex for beta=2, and the 2N x 2N
// complex representation for beta=4.
struct HaarMatrix {
  Eigen::MatrixXcd entries;
  int beta = 2;
  int n = 1;

  int rep_dim() const { return static_cast<int>(entries.rows()); }
};

namespace detail {

// -J conj(u) for the block-diagonal symplectic unit J.
inline Eigen::VectorXcd symplectic_partner(const Eigen::VectorXcd& u) {
  Eigen::VectorXcd v(u.size());
  for (int i = 0; i + 1 < u.size(); i += 2) {
    v[i] = -std::conj(u[i + 1]);
    v[i + 1] = std::conj(u[i]);
  }
  return v;
}

// Sequential Gram-Schmidt with one re-orthogonalization pass; R has positive
// diagonal by construction, which is the sign convention that makes the QR
// map push Gaussian matrices onto Haar measure.
inline void orthonormalize_against(Eigen::MatrixXcd& q, int ncols,
                                   Eigen::VectorXcd& g) {
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i < ncols; ++i)
      g -= (q.col(i).adjoint() * g)(0) * q.col(i);
}

}  // namespace detail

// One Haar-distributed element of O(N), U(N) or Sp(2N). In the rare event of
// numerical degeneracy a fresh column is drawn, at most three times.
inline HaarMatrix haar_sample(int beta, int n, RngStream& rng) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw invalid_parameter("haar_sample: beta must be 1, 2 or 4");
  if (n < 1) throw invalid_parameter("haar_sample: n must be positive");

  const int d = (beta == 4) ? 2 * n : n;
  HaarMatrix out;
  out.beta = beta;
  out.n = n;
  out.entries = Eigen::MatrixXcd::Zero(d, d);

  const int col_step = (beta == 4) ? 2 : 1;
  for (int c = 0; c < d; c += col_step) {
    for (int attempt = 0;; ++attempt) {
      Eigen::VectorXcd g(d);
      if (beta == 1) {
        for (int i = 0; i < d; ++i) g[i] = rng.normal();
      } else {
        for (int i = 0; i < d; ++i) g[i] = rng.complex_normal();
      }
      detail::orthonormalize_against(out.entries, c, g);
      const double norm = g.norm();
      if (norm > 1e-8 * std::sqrt(static_cast<double>(d))) {
        out.entries.col(c) = g / norm;
        if (beta == 4)
          out.entries.col(c + 1) =
              detail::symplectic_partner(out.entries.col(c));
        break;
      }
      if (attempt >= 3)
        throw domain_error("haar_sample: degenerate Gaussian draw persisted");
    }
  }
  return out;
}

// The principal sub-block in the ensemble's natural representation
// (2m x 2m of the complex representation when beta=4).
inline Eigen::MatrixXcd truncate(const HaarMatrix& u, int m) {
  if (m < 1 || m > u.n)
    throw invalid_parameter("truncate: need 1 <= m <= N");
  const int d = (u.beta == 4) ? 2 * m : m;
  return u.entries.topLeftCorner(d, d);
}

// One Monte Carlo integrand sample: the moment integrand of R_gamma at x.
//   beta=1: det(xI - A)^gamma, gamma a nonnegative integer, x real;
//   beta=2: |det(xI - A)|^gamma;
//   beta=4: det(xhat I_{2M} - A)^{gamma/2} in the complex representation,
//           with xhat the real quaternion |x| e^{i arg x}.
inline double charpoly_value(const Eigen::MatrixXcd& a,
                             std::complex<double> x, int beta, double gamma) {
  const int d = static_cast<int>(a.rows());
  Eigen::MatrixXcd shifted = -a;
  if (beta == 4) {
    const double xm = std::abs(x);
    const std::complex<double> phase =
        xm == 0.0 ? std::complex<double>(1.0, 0.0) : x / xm;
    for (int i = 0; i < d; i += 2) {
      shifted(i, i) += xm * phase;
      shifted(i + 1, i + 1) += xm * std::conj(phase);
    }
  } else {
    if (beta == 1 && x.imag() != 0.0)
      throw domain_error("charpoly_value: beta=1 requires real x");
    for (int i = 0; i < d; ++i) shifted(i, i) += x;
  }

  const std::complex<double> det = shifted.partialPivLu().determinant();
  switch (beta) {
    case 1: {
      const double rounded = std::round(gamma);
      if (gamma < 0.0 || rounded != gamma)
        throw invalid_parameter(
            "charpoly_value: beta=1 takes integer determinant powers");
      return std::pow(det.real(), rounded);
    }
    case 2:
      return std::pow(std::abs(det), gamma);
    case 4: {
      // Quaternionic determinants are real and nonnegative; the imaginary
      // part is rounding noise.
      const double re = std::max(det.real(), 0.0);
      return std::pow(re, 0.5 * gamma);
    }
    default:
      throw invalid_parameter("charpoly_value: beta must be 1, 2 or 4");
  }
}

// Moment query: exponent gamma (R_{2k} corresponds to gamma = 2k) and the
// evaluation point.
struct MomentQuery {
  double gamma = 2.0;
  std::complex<double> x = 0.0;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr_est = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

// Fills values[i] = per_sample(stream keyed by (seed, i)). Workers own
// disjoint index ranges, so the content never depends on the thread count.
template <typename F>
void fill_samples(std::vector<double>& values, std::uint64_t seed,
                  F&& per_sample, int n_threads = 0) {
  const long n_samples = static_cast<long>(values.size());
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }
  n_threads = static_cast<int>(
      std::min<long>(n_threads, std::max<long>(1, n_samples / 64)));

  auto run_range = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      RngStream stream(seed, static_cast<std::uint64_t>(i) + 1);
      values[i] = per_sample(stream);
    }
  };
  if (n_threads == 1) {
    run_range(0, n_samples);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (n_samples + n_threads - 1) / n_threads;
  for (int t = 0; t < n_threads; ++t) {
    const long lo = t * chunk;
    const long hi = std::min<long>(n_samples, lo + chunk);
    if (lo < hi) pool.emplace_back(run_range, lo, hi);
  }
  for (auto& th : pool) th.join();
}

// Mean and standard error with a pairwise reduction in index order.
inline MCEstimate sample_stats(const std::vector<double>& values,
                               std::uint64_t seed) {
  const long n = static_cast<long>(values.size());
  if (n < 2) throw invalid_parameter("sample_stats: need at least two samples");
  MCEstimate est;
  est.n_samples = n;
  est.seed = seed;
  est.mean = pairwise_sum(values) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (long i = 0; i < n; ++i) {
    const double d = values[i] - est.mean;
    sq[i] = d * d;
  }
  est.stderr_est =
      std::sqrt(pairwise_sum(sq) / (static_cast<double>(n) * (n - 1.0)));
  return est;
}

// Deterministic Monte Carlo driver: sample i draws from an RNG stream keyed
// by (seed, i), values are reduced in index order, so the estimate is
// bit-identical for any worker count.
template <typename F>
MCEstimate mc_estimate(long n_samples, std::uint64_t seed, F&& per_sample,
                       int n_threads = 0) {
  if (n_samples < 2)
    throw invalid_parameter("mc_estimate: need at least two samples");
  std::vector<double> values(n_samples);
  fill_samples(values, seed, per_sample, n_threads);
  return sample_stats(values, seed);
}

// Monte Carlo estimate of the characteristic-polynomial moment by direct
// Haar sampling and truncation.
inline MCEstimate mc_moment(const EnsembleSpec& spec, const MomentQuery& query,
                            long n_samples, std::uint64_t seed,
                            int n_threads = 0) {
  if (spec.beta == 1 && query.x.imag() != 0.0)
    throw domain_error("mc_moment: beta=1 requires real x");
  if (query.gamma < 0.0)
    throw invalid_parameter("mc_moment: gamma must be nonnegative");
  return mc_estimate(
      n_samples, seed,
      [&spec, &query](RngStream& rng) {
        const HaarMatrix u = haar_sample(spec.beta, spec.n_total, rng);
        const Eigen::MatrixXcd a = truncate(u, spec.m_trunc);
        return charpoly_value(a, query.x, spec.beta, query.gamma);
      },
      n_threads);
}

// One exact sample of the det(I_M - A) statistic using the dimension
// iteration of the recursive Haar construction; no N x N matrix is built.
// Returns |det| for beta=2 and the natural-representation determinant for
// beta in {1,4} (both almost surely nonnegative).
inline double bhny_boundary_sample(const EnsembleSpec& spec, RngStream& rng) {
  const int m = spec.m_trunc;
  const int n = spec.n_total;
  double log_acc = 0.0;
  switch (spec.beta) {
    case 2: {
      for (int k = 1; k <= m; ++k) {
        const double b = rng.beta(1.0, static_cast<double>(n - k));
        const double omega = rng.uniform(0.0, 2.0 * M_PI);
        const double r = std::sqrt(b);
        // |1 - e^{i omega} r|^2 = 1 - 2 r cos omega + r^2
        const double f2 = 1.0 - 2.0 * r * std::cos(omega) + b;
        if (f2 <= 0.0) return 0.0;
        log_acc += 0.5 * std::log(f2);
      }
      return std::exp(log_acc);
    }
    case 1: {
      for (int k = 1; k <= m; ++k) {
        const double b = rng.beta(0.5, 0.5 * (n - k));
        const double f = 1.0 - rng.rademacher() * std::sqrt(b);
        if (f <= 0.0) return 0.0;  // the terminal step can land exactly on 0
        log_acc += std::log(f);
      }
      return std::exp(log_acc);
    }
    case 4: {
      for (int k = 1; k <= m; ++k) {
        // First two complex coordinates of a uniform unit vector in
        // C^{2(N-k+1)}: the sphere shrinks by one quaternionic unit per step.
        const int dim = 2 * (n - k + 1);
        double a = rng.normal(), b = rng.normal(), c = rng.normal(),
               d = rng.normal();
        double norm2 = a * a + b * b + c * c + d * d;
        for (int i = 4; i < 2 * dim; ++i) {
          const double g = rng.normal();
          norm2 += g * g;
        }
        const double inv = 1.0 / norm2;
        const double f = (1.0 - a / std::sqrt(norm2)) *
                             (1.0 - a / std::sqrt(norm2)) +
                         (b * b + c * c + d * d) * inv;
        if (f <= 0.0) return 0.0;
        log_acc += std::log(f);
      }
      return std::exp(log_acc);
    }
    default:
      throw invalid_parameter("bhny_boundary_sample: beta must be 1, 2 or 4");
  }
}

enum class BetaProductForm { m_fold, kappa_fold };

// One sample of log|det A| as a half-sum of independent log-Beta variables,
// in either the M-fold or the kappa-fold form of the distributional identity.
inline double beta_product_logdet_sample(const EnsembleSpec& spec,
                                         BetaProductForm form,
                                         RngStream& rng) {
  const double hb = 0.5 * spec.beta;
  const int kappa = spec.kappa();
  double acc = 0.0;
  switch (form) {
    case BetaProductForm::m_fold: {
      if (kappa == 0) return 0.0;  // |det| of a full Haar matrix is 1
      for (int j = 0; j < spec.m_trunc; ++j)
        acc += std::log(rng.beta(hb * (1.0 + j), hb * kappa));
      return 0.5 * acc;
    }
    case BetaProductForm::kappa_fold: {
      if (kappa < 1)
        throw domain_error(
            "beta_product_logdet_sample: kappa-fold form needs kappa >= 1");
      for (int j = 0; j < kappa; ++j)
        acc += std::log(rng.beta(hb * (1.0 + j), hb * spec.m_trunc));
      return 0.5 * acc;
    }
  }
  throw invalid_parameter("beta_product_logdet_sample: unknown form");
}

}  // namespace truncmom
