#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "truncmom/asymptotics.hpp"
#include "truncmom/gamma_products.hpp"
#include "truncmom/quadrature.hpp"
#include "truncmom/sampling.hpp"
#include "truncmom/series.hpp"

namespace truncmom {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace validation {

namespace detail {

inline std::vector<std::complex<double>> eval_points(int beta) {
  std::vector<std::complex<double>> xs{{0.0, 0.0}, {0.3, 0.0}};
  if (beta == 2) xs.emplace_back(0.5, 0.2);
  if (beta == 1) xs.emplace_back(-0.4, 0.0);
  return xs;
}

// Deterministic per-(criterion, cell) seeds.
inline std::uint64_t cell_seed(int criterion, int cell) {
  return 0xace0ull * 1000003ull + criterion * 7919ull + cell;
}

struct Failures {
  int count = 0;
  std::ostringstream log;
  void fail(const std::string& what) {
    if (count < 4) log << (count ? "; " : "") << what;
    ++count;
  }
};

// Moments of bhny samples at gamma in {1,2} from one shared batch of draws,
// sampled on per-index streams so the batch is worker-count independent.
inline std::pair<MCEstimate, MCEstimate> bhny_two_moments(
    const EnsembleSpec& spec, long n, std::uint64_t seed, int threads) {
  std::vector<double> s(n);
  fill_samples(
      s, seed,
      [&spec](RngStream& rng) { return bhny_boundary_sample(spec, rng); },
      threads);
  const MCEstimate first = sample_stats(s, seed);
  for (double& v : s) v *= v;
  const MCEstimate second = sample_stats(s, seed);
  return {first, second};
}

}  // namespace detail

// 1. Exact series, duality quadrature and Monte Carlo agree cell by cell.
inline CriterionResult triangle_consistency(int threads) {
  detail::Failures f;
  double max_rel = 0.0, max_z = 0.0;
  int cell = 0;
  for (int beta : {1, 2, 4}) {
    for (int m : {2, 3}) {
      for (int n : {4, 6}) {
        for (int k : {1, 2}) {
          const EnsembleSpec spec(beta, n, m);
          const auto poly = exact_moment(spec, k);
          for (const auto& x : detail::eval_points(beta)) {
            ++cell;
            const double exact = poly.evaluate(x);
            const double dual = duality_moment(spec, k, x).value;
            const double tol = (beta == 4) ? 1e-6 : 1e-8;
            const double rel = std::abs(dual / exact - 1.0);
            max_rel = std::max(max_rel, rel);
            if (!(rel <= tol))
              f.fail(spec.label() + " k=" + std::to_string(k) +
                     " duality rel=" + std::to_string(rel));
            const auto mc =
                mc_moment(spec, {2.0 * k, x}, 200000,
                          detail::cell_seed(1, cell), threads);
            const double z = std::abs(mc.mean - exact) / mc.stderr_est;
            max_z = std::max(max_z, z);
            if (!(z <= 4.0))
              f.fail(spec.label() + " k=" + std::to_string(k) +
                     " mc z=" + std::to_string(z));
          }
        }
      }
    }
  }
  std::ostringstream d;
  d << cell << " cells, max duality rel err " << max_rel << ", max |z| "
    << max_z;
  if (f.count) d << "; FAILED: " << f.log.str();
  return {1, "triangle consistency (series = duality = MC)", f.count == 0,
          d.str()};
}

// 2. Series at the unit circle against the boundary Gamma products.
inline CriterionResult gauss_summation(int) {
  detail::Failures f;
  double max_rel = 0.0;
  for (int beta : {1, 2, 4}) {
    for (int m : {2, 3}) {
      for (int n : {4, 6}) {
        for (int k : {1, 2}) {
          const EnsembleSpec spec(beta, n, m);
          const double series = exact_moment(spec, k).evaluate_y(1.0);
          const double gp =
              boundary_moment(spec, boundary_gamma_for_r2k(beta, k)).value();
          const double rel = std::abs(series / gp - 1.0);
          max_rel = std::max(max_rel, rel);
          if (!(rel <= 1e-10))
            f.fail(spec.label() + " k=" + std::to_string(k) +
                   " rel=" + std::to_string(rel));
        }
      }
    }
  }
  std::ostringstream d;
  d << "max rel err " << max_rel;
  if (f.count) d << "; FAILED: " << f.log.str();
  return {2, "Gauss summation (series at |x|=1 = Gamma products)",
          f.count == 0, d.str()};
}

// 3. Recursive boundary samplers reproduce the Gamma products.
inline CriterionResult bhny_sampler_moments(int threads) {
  detail::Failures f;
  double max_z = 0.0;
  int cell = 0;
  for (int beta : {1, 2, 4}) {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}, {4, 3}}) {
      const EnsembleSpec spec(beta, n, m);
      const auto [first, second] = detail::bhny_two_moments(
          spec, 1000000, detail::cell_seed(3, ++cell), threads);
      const double e1 = boundary_moment(spec, 1.0).value();
      const double e2 = boundary_moment(spec, 2.0).value();
      const double z1 = std::abs(first.mean - e1) / first.stderr_est;
      const double z2 = std::abs(second.mean - e2) / second.stderr_est;
      max_z = std::max({max_z, z1, z2});
      if (!(z1 <= 4.0))
        f.fail(spec.label() + " gamma=1 z=" + std::to_string(z1));
      if (!(z2 <= 4.0))
        f.fail(spec.label() + " gamma=2 z=" + std::to_string(z2));
    }
  }
  std::ostringstream d;
  d << "9 ensembles x {1,2} moments, 1e6 draws each, max |z| " << max_z;
  if (f.count) d << "; FAILED: " << f.log.str();
  return {3, "recursive boundary samplers vs Gamma products", f.count == 0,
          d.str()};
}

// 4. Beta-product identities for the log-determinant.
inline CriterionResult beta_product_identities(int threads) {
  detail::Failures f;
  double max_z = 0.0;
  int cell = 0;
  for (int beta : {1, 2, 4}) {
    const EnsembleSpec spec(beta, 4, 2);
    for (auto form : {BetaProductForm::m_fold, BetaProductForm::kappa_fold}) {
      for (double g : {1.0, 2.0}) {
        const auto est = mc_estimate(
            1000000, detail::cell_seed(4, ++cell),
            [&spec, form, g](RngStream& rng) {
              return std::exp(g *
                              beta_product_logdet_sample(spec, form, rng));
            },
            threads);
        const double expected = logdet_mgf(spec, g).value();
        const double z = std::abs(est.mean - expected) / est.stderr_est;
        max_z = std::max(max_z, z);
        if (!(z <= 4.0))
          f.fail(spec.label() + " gamma=" + std::to_string(g) +
                 " z=" + std::to_string(z));
      }
    }
  }
  // Exact factorial identity for beta = 2.
  double max_rel = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= n; ++m) {
      const double expected =
          std::exp(log_gamma(m + 1.0) + log_gamma(n - m + 1.0) -
                   log_gamma(n + 1.0));
      const double rel =
          std::abs(logdet_mgf(EnsembleSpec(2, n, m), 2.0).value() / expected -
                   1.0);
      max_rel = std::max(max_rel, rel);
      if (!(rel <= 1e-12))
        f.fail("factorial identity N=" + std::to_string(n) +
               " M=" + std::to_string(m));
    }
  }
  std::ostringstream d;
  d << "max |z| " << max_z << ", factorial identity max rel " << max_rel;
  if (f.count) d << "; FAILED: " << f.log.str();
  return {4, "Beta-product log-determinant identities", f.count == 0, d.str()};
}

// 5. Weak non-unitarity approximation against the duality integral.
inline CriterionResult weak_asymptotics(int) {
  detail::Failures f;
  std::ostringstream d;
  for (int beta : {2, 1, 4}) {
    const double tol = beta == 2 ? 0.05 : 0.10;
    for (int kappa : {0, 1}) {
      double prev = 0.0;
      for (int m : {100, 400}) {
        const EnsembleSpec spec(beta, m + kappa, m);
        const double u = 1.0;
        const double exact =
            duality_moment(spec, 1, std::sqrt(1.0 - 2.0 * u / m)).value;
        const double rel =
            std::abs(weak_approx(beta, kappa, 1, u, m) / exact - 1.0);
        if (m == 100) {
          prev = rel;
          if (!(rel <= tol))
            f.fail("beta=" + std::to_string(beta) +
                   " kappa=" + std::to_string(kappa) +
                   " M=100 rel=" + std::to_string(rel));
        } else if (!(rel < prev)) {
          f.fail("beta=" + std::to_string(beta) +
                 " kappa=" + std::to_string(kappa) + " not improving at M=400");
        }
        if (beta == 2 && kappa == 1)
          d << "beta=2 kappa=1 M=" << m << " rel=" << rel << "  ";
      }
    }
  }
  if (f.count) d << "; FAILED: " << f.log.str();
  return {5, "weak asymptotics vs duality", f.count == 0, d.str()};
}

// 6. Strong non-unitarity approximation against the exact series.
inline CriterionResult strong_asymptotics(int) {
  detail::Failures f;
  std::ostringstream d;
  for (int k : {1, 2}) {
    for (double xr : {0.0, 0.4}) {
      double prev = 0.0;
      for (int m : {30, 60}) {
        const EnsembleSpec spec(2, 2 * m, m);
        const double exact = exact_moment(spec, k).evaluate_y(xr * xr);
        const double rel = std::abs(strong_approx(spec, k, xr) / exact - 1.0);
        if (m == 30) {
          prev = rel;
        } else {
          if (!(rel <= 0.10))
            f.fail("k=" + std::to_string(k) + " x=" + std::to_string(xr) +
                   " M=60 rel=" + std::to_string(rel));
          if (!(rel < prev))
            f.fail("k=" + std::to_string(k) + " x=" + std::to_string(xr) +
                   " not improving at M=60");
          d << "k=" << k << " x=" << xr << " rel=" << rel << "  ";
        }
      }
      const double factor =
          strong_boundary_factor(EnsembleSpec(2, 120, 60), k, 0.0);
      if (xr == 0.0 && !(factor >= 1.0 - 1e-6))
        f.fail("Gaussian factor at x=0 below 1-1e-6");
    }
  }
  if (f.count) d << "; FAILED: " << f.log.str();
  return {6, "strong asymptotics vs exact series", f.count == 0, d.str()};
}

// 7. Boundary CLT variance band and decay of the standardized third cumulant.
inline CriterionResult clt_coefficients(int) {
  detail::Failures f;
  std::ostringstream d;
  for (int beta : {1, 2, 4}) {
    const EnsembleSpec spec(beta, 10001, 10000);
    const double v = logdet_cumulant(spec, 2, true);
    const double vb = beta == 2 ? 0.5 : 1.0;
    const double ratio = v / (vb * std::log(10000.0));
    d << "beta=" << beta << " ratio=" << ratio << "  ";
    if (!(ratio >= 0.9 && ratio <= 1.1))
      f.fail("beta=" + std::to_string(beta) +
             " variance ratio=" + std::to_string(ratio) +
             " outside [0.9,1.1]");
    auto standardized = [beta](int m) {
      const EnsembleSpec s(beta, m + 1, m);
      return std::abs(logdet_cumulant(s, 3, true)) /
             std::pow(logdet_cumulant(s, 2, true), 1.5);
    };
    if (!(standardized(10000) < standardized(100)))
      f.fail("beta=" + std::to_string(beta) +
             " third cumulant not decaying");
  }
  if (f.count) d << "; FAILED: " << f.log.str();
  return {7, "CLT coefficients (variance band, skewness decay)", f.count == 0,
          d.str()};
}

// 8. Gamma limit of the shifted log-determinant MGF.
inline CriterionResult gamma_limit(int) {
  detail::Failures f;
  std::ostringstream d;
  const double g = 1.0;
  const int kappa = 2;
  for (int beta : {1, 2, 4}) {
    double prev = 1e9;
    for (int m : {1000, 4000}) {
      const EnsembleSpec spec(beta, m + kappa, m);
      const double shifted = logdet_mgf(spec, g).log_value +
                             0.5 * g * kappa * std::log(0.5 * beta * m);
      const double rel = std::abs(
          std::exp(shifted - gamma_limit_mgf(kappa, beta, g).log_value) - 1.0);
      if (m == 1000) {
        if (!(rel <= 0.02))
          f.fail("beta=" + std::to_string(beta) +
                 " rel=" + std::to_string(rel));
        d << "beta=" << beta << " rel=" << rel << "  ";
      } else if (!(rel < prev)) {
        f.fail("beta=" + std::to_string(beta) + " not decreasing in M");
      }
      prev = rel;
    }
  }
  if (f.count) d << "; FAILED: " << f.log.str();
  return {8, "Gamma limit of the shifted MGF", f.count == 0, d.str()};
}

// 9. Sampler sanity: structure residuals, sub-block trace, reproducibility.
inline CriterionResult sampler_sanity(int threads) {
  detail::Failures f;
  double max_resid = 0.0;
  RngStream rng(detail::cell_seed(9, 0), 1);
  for (int beta : {1, 2, 4}) {
    for (int n : {64, 256}) {
      const HaarMatrix u = haar_sample(beta, n, rng);
      const Eigen::MatrixXcd gram =
          u.entries * u.entries.adjoint() -
          Eigen::MatrixXcd::Identity(u.rep_dim(), u.rep_dim());
      double resid = gram.cwiseAbs().maxCoeff();
      if (beta == 4) {
        const int dd = u.rep_dim();
        Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(dd, dd);
        for (int i = 0; i < dd; i += 2) {
          j(i, i + 1) = 1.0;
          j(i + 1, i) = -1.0;
        }
        resid = std::max(
            resid,
            (u.entries * j * u.entries.transpose() - j).cwiseAbs().maxCoeff());
      }
      max_resid = std::max(max_resid, resid);
      if (!(resid <= 1e-12))
        f.fail("beta=" + std::to_string(beta) + " N=" + std::to_string(n) +
               " residual=" + std::to_string(resid));
    }
  }

  double max_z = 0.0;
  for (int beta : {1, 2, 4}) {
    const int n = 8, m = 4;
    const auto est = mc_estimate(
        20000, detail::cell_seed(9, beta),
        [beta, n, m](RngStream& g) {
          const auto a = truncate(haar_sample(beta, n, g), m);
          const double t = (a * a.adjoint()).trace().real();
          return beta == 4 ? 0.5 * t : t;
        },
        threads);
    const double z =
        std::abs(est.mean - static_cast<double>(m) * m / n) / est.stderr_est;
    max_z = std::max(max_z, z);
    if (!(z <= 4.0))
      f.fail("trace moment beta=" + std::to_string(beta) +
             " z=" + std::to_string(z));
  }

  const EnsembleSpec spec(2, 4, 2);
  const MomentQuery q{2.0, {0.3, 0.1}};
  const auto e1 = mc_moment(spec, q, 20000, detail::cell_seed(9, 77), 1);
  const auto e2 = mc_moment(spec, q, 20000, detail::cell_seed(9, 77), 2);
  const auto e8 = mc_moment(spec, q, 20000, detail::cell_seed(9, 77), 8);
  const bool reproducible = e1.mean == e2.mean && e1.mean == e8.mean &&
                            e1.stderr_est == e2.stderr_est &&
                            e1.stderr_est == e8.stderr_est;
  if (!reproducible) f.fail("MC estimate varies with worker count");

  std::ostringstream d;
  d << "max residual " << max_resid << ", trace max |z| " << max_z
    << ", workers 1/2/8 bit-identical: " << (reproducible ? "yes" : "no");
  if (f.count) d << "; FAILED: " << f.log.str();
  return {9, "sampler sanity (structure, trace moment, reproducibility)",
          f.count == 0, d.str()};
}

}  // namespace validation

// Runs the full acceptance grid (or one criterion); results carry wall time.
inline std::vector<CriterionResult> run_acceptance(
    int threads = 0, std::optional<int> only = std::nullopt) {
  using Fn = CriterionResult (*)(int);
  const Fn criteria[] = {
      validation::triangle_consistency, validation::gauss_summation,
      validation::bhny_sampler_moments, validation::beta_product_identities,
      validation::weak_asymptotics,     validation::strong_asymptotics,
      validation::clt_coefficients,     validation::gamma_limit,
      validation::sampler_sanity};
  std::vector<CriterionResult> results;
  for (int i = 0; i < 9; ++i) {
    if (only && *only != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r = criteria[i](threads);
    r.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    results.push_back(std::move(r));
  }
  return results;
}

inline std::string format_criterion_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.index << ": "
      << r.name << " (" << r.detail << ") [" << std::fixed;
  out.precision(1);
  out << r.seconds << " s]";
  return out.str();
}

}  // namespace truncmom
