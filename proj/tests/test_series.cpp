#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "truncmom/series.hpp"

using namespace truncmom;

TEST_CASE("exact_moment: degenerate and hand-checked cases") {
  // k = 0 is the constant polynomial 1.
  const auto p0 = exact_moment(EnsembleSpec(2, 4, 2), 0);
  REQUIRE(p0.degree() == 0);
  REQUIRE(p0.coeffs[0] == Catch::Approx(1.0));

  // E|det A|^2 at the origin equals M!(N-M)!/N! = 1/6.
  const auto p = exact_moment(EnsembleSpec(2, 4, 2), 1);
  REQUIRE_THAT(p.evaluate({0.0, 0.0}),
               Catch::Matchers::WithinRel(1.0 / 6.0, 1e-13));

  // Unit-circle anchor for beta = 2: Gamma(2)Gamma(4)/Gamma(3)^2.
  const auto p21 = exact_moment(EnsembleSpec(2, 2, 1), 1);
  REQUIRE_THAT(p21.evaluate({1.0, 0.0}),
               Catch::Matchers::WithinRel(1.5, 1e-13));

  // beta = 4 anchor: matches the boundary Gamma product at its exponent.
  const auto p41 = exact_moment(EnsembleSpec(4, 2, 1), 1);
  REQUIRE_THAT(p41.evaluate({1.0, 0.0}),
               Catch::Matchers::WithinRel(
                   boundary_moment(EnsembleSpec(4, 2, 1), 1.0).value(), 1e-12));

  // O(1) two-point measure: R(y) = y + 1.
  const auto p11 = exact_moment(EnsembleSpec(1, 1, 1), 1);
  REQUIRE(p11.degree() == 1);
  REQUIRE_THAT(p11.coeffs[0], Catch::Matchers::WithinRel(1.0, 1e-13));
  REQUIRE_THAT(p11.coeffs[1], Catch::Matchers::WithinRel(1.0, 1e-13));

  REQUIRE_THROWS_AS(p21.evaluate({0.3, 0.1}) + exact_moment(EnsembleSpec(1, 2, 1), 1).evaluate({0.3, 0.1}),
                    domain_error);
}

TEST_CASE("exact_moment: degree and leading coefficient") {
  for (int beta : {1, 2, 4}) {
    for (int n : {2, 4, 6}) {
      for (int m = 1; m <= n; m += 2) {
        for (int k : {1, 2, 3}) {
          const auto poly = exact_moment(EnsembleSpec(beta, n, m), k);
          REQUIRE(poly.degree() == k * m);
          REQUIRE_THAT(poly.coeffs[k * m],
                       Catch::Matchers::WithinRel(1.0, 1e-13));
        }
      }
    }
  }
}

TEST_CASE("termination: widening the enumeration window adds exact zeros") {
  for (int beta : {1, 2, 4}) {
    for (int k : {1, 2}) {
      const EnsembleSpec spec(beta, 5, 3);
      const auto base = exact_moment(spec, k);
      const auto wide = exact_moment(spec, k, k + 1);
      REQUIRE(base.coeffs.size() == wide.coeffs.size());
      for (std::size_t i = 0; i < base.coeffs.size(); ++i)
        REQUIRE(base.coeffs[i] == wide.coeffs[i]);
    }
  }
}

TEST_CASE("Gauss summation: series at the unit circle vs Gamma products") {
  for (int beta : {1, 2, 4}) {
    for (int n = 1; n <= 6; ++n) {
      for (int m = 1; m <= n; ++m) {
        for (int k = 1; k <= 3; ++k) {
          const EnsembleSpec spec(beta, n, m);
          const double series = exact_moment(spec, k).evaluate_y(1.0);
          const double gp =
              boundary_moment(spec, boundary_gamma_for_r2k(beta, k)).value();
          REQUIRE_THAT(series, Catch::Matchers::WithinRel(gp, 1e-10));
        }
      }
    }
  }
}

TEST_CASE("series at the origin reproduces the log-det MGF") {
  for (int beta : {1, 2, 4}) {
    for (int n : {3, 5, 6}) {
      for (int m = 1; m <= n; m += 2) {
        for (int k : {1, 2}) {
          const EnsembleSpec spec(beta, n, m);
          REQUIRE_THAT(exact_moment(spec, k).coeffs[0],
                       Catch::Matchers::WithinRel(
                           logdet_mgf(spec, 2.0 * k).value(), 1e-11));
        }
      }
    }
  }
}

TEST_CASE("noninteger_moment: terminating exponents agree with the polynomial") {
  for (int beta : {1, 2, 4}) {
    const EnsembleSpec spec(beta, 4, 2);
    for (int k : {1, 2}) {
      for (double xm : {1.3, 2.0}) {
        const auto exact = exact_moment(spec, k).evaluate_y(xm * xm);
        const auto tv = noninteger_moment(spec, 2.0 * k, xm, 30);
        REQUIRE(tv.converged);
        REQUIRE(std::abs(tv.value - exact) <= tv.tail + 1e-11 * std::abs(exact));
        REQUIRE_THAT(tv.value, Catch::Matchers::WithinRel(exact, 1e-10));
      }
    }
  }
}

TEST_CASE("noninteger_moment: trivial exponent and domain checks") {
  const EnsembleSpec spec(2, 3, 2);
  const auto tv = noninteger_moment(spec, 0.0, 1.5, 10);
  REQUIRE(tv.value == Catch::Approx(1.0));
  REQUIRE(tv.tail == 0.0);
  REQUIRE(tv.converged);

  REQUIRE_THROWS_AS(noninteger_moment(spec, 1.0, 1.0, 10), domain_error);
  REQUIRE_THROWS_AS(noninteger_moment(spec, 1.0, 0.8, 10), domain_error);
  REQUIRE_THROWS_AS(noninteger_moment(spec, -1.5, 2.0, 10), domain_error);
}

TEST_CASE("noninteger_moment: tail bound shrinks with the cap") {
  const EnsembleSpec spec(2, 3, 1);
  const double g = 1.3;
  const auto coarse = noninteger_moment(spec, g, 1.5, 8);
  const auto fine = noninteger_moment(spec, g, 1.5, 40);
  REQUIRE(coarse.converged);
  REQUIRE(fine.converged);
  REQUIRE(fine.tail < coarse.tail);
  // The geometric extrapolation is an estimate; it must capture the order of
  // magnitude of the true remainder.
  REQUIRE(std::abs(coarse.value - fine.value) <= 3.0 * coarse.tail + 1e-14);
  REQUIRE(std::abs(coarse.value - fine.value) >= 0.01 * fine.tail);
}
