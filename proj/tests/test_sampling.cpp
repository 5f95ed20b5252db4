#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "truncmom/gamma_products.hpp"
#include "truncmom/quadrature.hpp"
#include "truncmom/sampling.hpp"
#include "truncmom/series.hpp"

using namespace truncmom;

namespace {

constexpr double kKsCritical = 1.9495;  // significance 1e-3

double ks_one_sample(std::vector<double> xs,
                     const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i;
    else ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

double unitarity_residual(const HaarMatrix& u) {
  const Eigen::MatrixXcd g =
      u.entries * u.entries.adjoint() -
      Eigen::MatrixXcd::Identity(u.rep_dim(), u.rep_dim());
  return g.cwiseAbs().maxCoeff();
}

double symplectic_residual(const HaarMatrix& u) {
  const int d = u.rep_dim();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; i += 2) {
    j(i, i + 1) = 1.0;
    j(i + 1, i) = -1.0;
  }
  const Eigen::MatrixXcd g = u.entries * j * u.entries.transpose() - j;
  return g.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("rng streams: determinism and independence") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform();
    REQUIRE(va == b.uniform());
    REQUIRE(va != c.uniform());
    REQUIRE(va >= 0.0);
    REQUIRE(va < 1.0);
  }
}

TEST_CASE("rng: gamma and beta moments") {
  const long n = 100000;
  for (double shape : {0.5, 1.0, 2.5}) {
    const auto est = mc_estimate(
        n, 11, [shape](RngStream& g) { return g.gamma(shape); }, 2);
    REQUIRE_THAT(est.mean,
                 Catch::Matchers::WithinAbs(shape, 4.0 * est.stderr_est));
  }
  for (auto [pa, pb] : std::vector<std::pair<double, double>>{
           {0.5, 1.0}, {1.0, 3.0}, {2.0, 0.5}}) {
    const auto est = mc_estimate(
        n, 13, [pa, pb](RngStream& g) { return g.beta(pa, pb); }, 2);
    REQUIRE_THAT(est.mean, Catch::Matchers::WithinAbs(pa / (pa + pb),
                                                      4.0 * est.stderr_est));
  }
  RngStream g(1);
  REQUIRE(g.beta(1.0, 0.0) == 1.0);
}

TEST_CASE("haar_sample: unitarity and symplectic structure") {
  RngStream rng(2024);
  for (int beta : {1, 2, 4}) {
    for (int n : {2, 8, 64}) {
      const HaarMatrix u = haar_sample(beta, n, rng);
      REQUIRE(u.rep_dim() == (beta == 4 ? 2 * n : n));
      REQUIRE(unitarity_residual(u) <= 1e-12);
      if (beta == 1)
        REQUIRE(u.entries.imag().cwiseAbs().maxCoeff() == 0.0);
      if (beta == 4) REQUIRE(symplectic_residual(u) <= 1e-12);
    }
  }
}

TEST_CASE("haar_sample beta=4: spectrum comes in conjugate pairs") {
  RngStream rng(5);
  const HaarMatrix u = haar_sample(4, 4, rng);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u.entries);
  std::vector<std::complex<double>> evs(es.eigenvalues().data(),
                                        es.eigenvalues().data() + 8);
  for (const auto& ev : evs) {
    const auto conj_it =
        std::min_element(evs.begin(), evs.end(), [&](auto l, auto r) {
          return std::abs(l - std::conj(ev)) < std::abs(r - std::conj(ev));
        });
    REQUIRE(std::abs(*conj_it - std::conj(ev)) < 1e-10);
  }
}

TEST_CASE("haar_sample: trace moments") {
  const long n_samples = 30000;
  // E|tr U|^2 = 1 for U(n).
  const auto u2 = mc_estimate(
      n_samples, 21,
      [](RngStream& g) {
        return std::norm(haar_sample(2, 2, g).entries.trace());
      },
      2);
  REQUIRE_THAT(u2.mean, Catch::Matchers::WithinAbs(1.0, 4.0 * u2.stderr_est));

  // E (tr O)^2 = 1 for O(n).
  const auto o3 = mc_estimate(
      n_samples, 22,
      [](RngStream& g) {
        const double t = haar_sample(1, 3, g).entries.trace().real();
        return t * t;
      },
      2);
  REQUIRE_THAT(o3.mean, Catch::Matchers::WithinAbs(1.0, 4.0 * o3.stderr_est));
}

TEST_CASE("truncate: shapes and sub-block statistics") {
  RngStream rng(31);
  const HaarMatrix u = haar_sample(2, 5, rng);
  REQUIRE(truncate(u, 5) == u.entries);
  REQUIRE(truncate(u, 2).rows() == 2);
  REQUIRE_THROWS_AS(truncate(u, 6), invalid_parameter);
  const HaarMatrix uq = haar_sample(4, 3, rng);
  REQUIRE(truncate(uq, 2).rows() == 4);

  // |A_11|^2 of a truncated U(N) is Beta(1, N-1).
  const int n = 4;
  const long draws = 100000;
  std::vector<double> xs(draws);
  for (long i = 0; i < draws; ++i) {
    RngStream g(77, i + 1);
    xs[i] = std::norm(haar_sample(2, n, g).entries(0, 0));
  }
  const double d = ks_one_sample(
      xs, [n](double x) { return 1.0 - std::pow(1.0 - x, n - 1); });
  REQUIRE(d < kKsCritical / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("truncate: E tr(A A^dagger) = M^2/N in natural units") {
  const long n_samples = 20000;
  for (int beta : {1, 2, 4}) {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{4, 2}, {6, 3}}) {
      const auto est = mc_estimate(
          n_samples, 100 + beta,
          [beta, n = n, m = m](RngStream& g) {
            const auto a = truncate(haar_sample(beta, n, g), m);
            const double t = (a * a.adjoint()).trace().real();
            return beta == 4 ? 0.5 * t : t;  // quaternionic trace units
          },
          2);
      const double expected = static_cast<double>(m) * m / n;
      REQUIRE_THAT(est.mean,
                   Catch::Matchers::WithinAbs(expected, 4.0 * est.stderr_est));
    }
  }
}

TEST_CASE("charpoly_value: structural cases") {
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(3, 3);
  REQUIRE_THAT(charpoly_value(zero, {0.5, 0.2}, 2, 4.0),
               Catch::Matchers::WithinRel(std::pow(0.29, 2 * 3), 1e-12));

  // O(1): the sample is (x -+ 1)^{2k}.
  RngStream rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto u = haar_sample(1, 1, rng);
    const auto a = truncate(u, 1);
    const double v = charpoly_value(a, 0.3, 1, 2.0);
    const bool low = std::abs(v - 0.49) < 1e-12;
    const bool high = std::abs(v - 1.69) < 1e-12;
    REQUIRE((low || high));
  }

  // beta=4 integrands are real and nonnegative for real-quaternion x.
  for (int i = 0; i < 2000; ++i) {
    RngStream g(55, i + 1);
    const auto a = truncate(haar_sample(4, 2, g), 1);
    const double v = charpoly_value(
        a, std::polar(0.7, 0.4), 4, 2.0);
    REQUIRE(v >= 0.0);
    REQUIRE(std::isfinite(v));
  }

  REQUIRE_THROWS_AS(charpoly_value(zero, {0.5, 0.2}, 1, 2.0), domain_error);
  REQUIRE_THROWS_AS(charpoly_value(zero, 0.5, 1, 1.5), invalid_parameter);
}

TEST_CASE("mc_moment: degenerate exponent and oracle anchors") {
  const EnsembleSpec spec(2, 4, 2);
  const auto triv = mc_moment(spec, {0.0, 0.3}, 100, 9);
  REQUIRE(triv.mean == 1.0);
  REQUIRE(triv.stderr_est == 0.0);

  // E|det A|^2 = 1/6 at x = 0.
  const auto origin = mc_moment(spec, {2.0, 0.0}, 40000, 1234);
  REQUIRE_THAT(origin.mean,
               Catch::Matchers::WithinAbs(1.0 / 6.0, 4.0 * origin.stderr_est));
  REQUIRE(origin.stderr_est < 0.01);

  // Real ensemble against the duality integral.
  const EnsembleSpec real_spec(1, 4, 2);
  const double quad = duality_moment(real_spec, 1, 0.5).value;
  const auto mc = mc_moment(real_spec, {2.0, 0.5}, 60000, 4321);
  REQUIRE_THAT(mc.mean, Catch::Matchers::WithinAbs(quad, 4.0 * mc.stderr_est));

  // Quaternion ensemble against the series.
  const EnsembleSpec sp_spec(4, 4, 2);
  const double series = exact_moment(sp_spec, 1).evaluate_y(0.09);
  const auto mcq = mc_moment(sp_spec, {2.0, 0.3}, 40000, 5555);
  REQUIRE_THAT(mcq.mean,
               Catch::Matchers::WithinAbs(series, 4.0 * mcq.stderr_est));
}

TEST_CASE("mc_moment: bit-identical across worker counts") {
  const EnsembleSpec spec(2, 4, 2);
  const MomentQuery q{2.0, {0.3, 0.1}};
  const auto e1 = mc_moment(spec, q, 5000, 777, 1);
  const auto e2 = mc_moment(spec, q, 5000, 777, 2);
  const auto e8 = mc_moment(spec, q, 5000, 777, 8);
  REQUIRE(e1.mean == e2.mean);
  REQUIRE(e1.mean == e8.mean);
  REQUIRE(e1.stderr_est == e2.stderr_est);
  REQUIRE(e1.stderr_est == e8.stderr_est);

  const auto other = mc_moment(spec, q, 5000, 778, 2);
  REQUIRE(other.mean != e1.mean);
}

TEST_CASE("rotation invariance of |det(e^{i theta} I - A)| for beta=2") {
  const EnsembleSpec spec(2, 4, 2);
  auto draw = [&](double theta) {
    std::vector<double> xs(20000);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      RngStream g(91, i + 1);
      const auto a = truncate(haar_sample(2, spec.n_total, g), spec.m_trunc);
      xs[i] = charpoly_value(a, std::polar(1.0, theta), 2, 1.0);
    }
    return xs;
  };
  const auto base = draw(0.0);
  for (double theta : {1.0, M_PI / 2}) {
    const auto other = draw(theta);
    const double d = ks_two_sample(base, other);
    const double crit =
        kKsCritical * std::sqrt(2.0 / static_cast<double>(base.size()));
    REQUIRE(d < crit);
  }
}

TEST_CASE("recursive boundary sampler: exact two-point law at O(1)") {
  int zeros = 0, twos = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    RngStream g(17, i + 1);
    const double s = bhny_boundary_sample(EnsembleSpec(1, 1, 1), g);
    if (s == 0.0) ++zeros;
    else if (std::abs(s - 2.0) < 1e-12) ++twos;
  }
  REQUIRE(zeros + twos == n);
  REQUIRE(std::abs(zeros / static_cast<double>(n) - 0.5) <
          4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("recursive boundary sampler: moments match the Gamma products") {
  const long n = 200000;
  for (int beta : {1, 2, 4}) {
    for (auto [nn, mm] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}}) {
      const EnsembleSpec spec(beta, nn, mm);
      for (double g : {1.0, 2.0}) {
        const auto est = mc_estimate(
            n, 300 + beta,
            [&spec, g](RngStream& rng) {
              return std::pow(bhny_boundary_sample(spec, rng), g);
            },
            2);
        const double expected = boundary_moment(spec, g).value();
        REQUIRE_THAT(est.mean, Catch::Matchers::WithinAbs(
                                   expected, 4.0 * est.stderr_est));
      }
    }
  }
  // The hand-derived anchors.
  const auto e12 = mc_estimate(
      n, 71,
      [](RngStream& g) {
        const double s = bhny_boundary_sample(EnsembleSpec(2, 2, 1), g);
        return s * s;
      },
      2);
  REQUIRE_THAT(e12.mean, Catch::Matchers::WithinAbs(1.5, 4.0 * e12.stderr_est));
  const auto e41 = mc_estimate(
      n, 72,
      [](RngStream& g) {
        return bhny_boundary_sample(EnsembleSpec(4, 1, 1), g);
      },
      2);
  REQUIRE_THAT(e41.mean, Catch::Matchers::WithinAbs(2.0, 4.0 * e41.stderr_est));
}

TEST_CASE("beta-product sampler: degenerate case and MGF anchors") {
  RngStream g(8);
  REQUIRE(beta_product_logdet_sample(EnsembleSpec(2, 3, 3),
                                     BetaProductForm::m_fold, g) == 0.0);
  REQUIRE_THROWS_AS(beta_product_logdet_sample(EnsembleSpec(2, 3, 3),
                                               BetaProductForm::kappa_fold, g),
                    domain_error);

  const long n = 200000;
  for (int beta : {1, 2, 4}) {
    const EnsembleSpec spec(beta, 4, 2);
    for (auto form : {BetaProductForm::m_fold, BetaProductForm::kappa_fold}) {
      for (double gam : {1.0, 2.0}) {
        const auto est = mc_estimate(
            n, 400 + beta,
            [&spec, form, gam](RngStream& rng) {
              return std::exp(gam *
                              beta_product_logdet_sample(spec, form, rng));
            },
            2);
        const double expected = logdet_mgf(spec, gam).value();
        REQUIRE_THAT(est.mean, Catch::Matchers::WithinAbs(
                                   expected, 4.0 * est.stderr_est));
      }
    }
  }
}

TEST_CASE("beta-product sampler: the two forms share one distribution") {
  const EnsembleSpec spec(1, 4, 2);
  const long n = 100000;
  std::vector<double> a(n), b(n);
  for (long i = 0; i < n; ++i) {
    RngStream ga(51, i + 1), gb(52, i + 1);
    a[i] = beta_product_logdet_sample(spec, BetaProductForm::m_fold, ga);
    b[i] = beta_product_logdet_sample(spec, BetaProductForm::kappa_fold, gb);
  }
  const double d = ks_two_sample(a, b);
  REQUIRE(d < kKsCritical * std::sqrt(2.0 / static_cast<double>(n)));
}
