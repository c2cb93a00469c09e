#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "outer_radii/error.hpp"
#include "outer_radii/simplex_radii.hpp"

using namespace outer_radii;

TEST_SUITE("simplex_radii") {
  TEST_CASE("standard embedding") {
    const Polytope t1 = standard_embedding(1);
    CHECK(t1.size() == 2);
    CHECK((t1.vertices[0] - RealVec::Unit(2, 0)).norm() == 0.0);
    CHECK((t1.vertices[0] - t1.vertices[1]).norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    const Polytope t3 = standard_embedding(3);
    for (std::size_t a = 0; a < t3.size(); ++a) {
      CHECK(t3.vertices[a].norm() == doctest::Approx(1.0).epsilon(1e-15));
      for (std::size_t b = a + 1; b < t3.size(); ++b) {
        CHECK((t3.vertices[a] - t3.vertices[b]).norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
      }
    }
    for (const auto& v : standard_embedding(10).vertices) CHECK(v.sum() == 1.0);
    CHECK_THROWS_AS(standard_embedding(0), Error);
  }

  TEST_CASE("regular simplex has the requested edge") {
    const Polytope p = regular_simplex(4, 0.75);
    CHECK((p.vertices[1] - p.vertices[3]).norm() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(regular_simplex(3, -1.0), Error);
  }

  TEST_CASE("closed form examples") {
    const auto a = closed_form({3, 2, 1.0});
    CHECK(a.formula == RadiiFormula::OddTheorem2);
    CHECK(a.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.exact_expr == "sqrt((n-1)/(2(n+1)))");

    const auto b = closed_form({4, 3, 1.0});
    CHECK(b.formula == RadiiFormula::EvenTheorem2);
    CHECK(std::abs(b.value - 7 / (2 * std::sqrt(40.0))) <= 1e-15);
    CHECK(std::abs(b.value - 0.553399) <= 5e-7);
    CHECK(b.exact_expr == "(2n-1)/(2sqrt(2n(n+1)))");

    const auto c = closed_form({5, 3, std::sqrt(2.0)});
    CHECK(c.formula == RadiiFormula::SqrtJOverN1);
    CHECK(std::abs(c.value - std::sqrt(0.5)) <= 1e-15);

    const auto d = closed_form({4, 1, 1.0});
    CHECK(d.formula == RadiiFormula::NoClosedForm);
    CHECK(std::isnan(d.value));
    CHECK(d.exact_expr.empty());
  }

  TEST_CASE("closed form rejects invalid queries") {
    CHECK_THROWS_AS(closed_form({3, 0, 1.0}), Error);
    CHECK_THROWS_AS(closed_form({3, 4, 1.0}), Error);
    CHECK_THROWS_AS(closed_form({3, 2, 0.0}), Error);
    try {
      closed_form({3, 5, 1.0});
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidJ);
    }
  }

  TEST_CASE("closed form agrees with the independent formulas") {
    for (int n = 1; n <= 30; ++n) {
      for (int j = 1; j <= n; ++j) {
        const double ref = oracle::regular_radius_edge_sqrt2(n, j) / std::sqrt(2.0);
        const auto got = closed_form({n, j, 1.0});
        if (std::isnan(ref)) {
          CHECK(got.formula == RadiiFormula::NoClosedForm);
        } else {
          CHECK(std::abs(got.value - ref) <= 1e-14);
        }
      }
    }
  }

  TEST_CASE("edge scaling is exact and values are monotone in j") {
    for (int n = 2; n <= 12; ++n) {
      double prev = 0.0;
      for (int j = 1; j <= n; ++j) {
        const auto unit = closed_form({n, j, 1.0});
        if (unit.formula == RadiiFormula::NoClosedForm) continue;
        for (double lambda : {0.5, 2.0, 3.0, 1024.0}) {
          CHECK(closed_form({n, j, lambda}).value == lambda * unit.value);
        }
        CHECK(unit.value >= prev);
        prev = unit.value;
      }
    }
    CHECK(closed_form({4, 3, 2.0}).exact_expr == "2*(2n-1)/(2sqrt(2n(n+1)))");
  }

  TEST_CASE("offset of the optimal facet-parallel axis") {
    CHECK(std::abs(pn_star(4, 3) - 3 / (2 * std::sqrt(20.0))) <= 1e-15);
    CHECK(std::abs(pn_star(4, 3) - 0.335410) <= 5e-7);
    CHECK(std::abs(pn_star(6, 2) - 6 / (2 * std::sqrt(42.0))) <= 1e-15);
    CHECK(std::abs(pn_star(6, 2) - 0.462910) <= 5e-7);
    CHECK(pn_star_general(0.8, 0.8) == 0.0);
    for (int n : {4, 6, 8}) {
      CHECK_THROWS_AS(pn_star(n, 1), Error);
      CHECK_THROWS_AS(pn_star(n, n), Error);
    }
    CHECK_THROWS_AS(pn_star(5, 3), Error);
  }

  TEST_CASE("general offset agrees with the closed-form one") {
    // Apex height of the edge-sqrt(2) simplex over a facet and the facet's
    // (j-1)-radius sqrt((j-1)/n).
    for (int n : {4, 6, 8, 10}) {
      const double height = std::sqrt((n + 1.0) / n);
      for (int j = 2; j <= n - 1; ++j) {
        const double r = std::sqrt((j - 1.0) / n);
        CHECK(std::abs(pn_star_general(height, r) - pn_star(n, j)) <= 1e-14);
      }
    }
  }

  TEST_CASE("radius from the quartic objective") {
    CHECK(std::abs(rho_from_objective(3, 2, 0.25) - std::sqrt(0.5)) <= 1e-15);
    CHECK(std::abs(rho_from_objective(4, 3, 0.25) - 7 / (4 * std::sqrt(5.0))) <= 1e-15);
    CHECK(std::abs(rho_from_objective(2, 1, 0.5) - std::sqrt(3.0 / 8.0)) <= 1e-15);
    for (int n = 3; n <= 41; n += 2) {
      CHECK(std::abs(rho_from_objective(n, n - 1, 1.0 / (n + 1)) - std::sqrt((n - 1.0) / (n + 1.0))) <= 1e-14);
    }
    for (int n = 2; n <= 40; n += 2) {
      const double even = closed_form({n, n - 1, std::sqrt(2.0)}).value;
      CHECK(std::abs(rho_from_objective(n, n - 1, 1.0 / n) - even) <= 1e-14);
    }
    // c = n - j large makes the first term very negative.
    try {
      rho_from_objective(10, 1, 0.0);
      FAIL("expected NegativeRadicand");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NegativeRadicand);
    }
  }

  TEST_CASE("facet-parallel upper bound") {
    CHECK(std::abs(upper_bound_facet_parallel(4) - 7 / (2 * std::sqrt(20.0))) <= 1e-15);
    CHECK(std::abs(upper_bound_facet_parallel(2) - 3 / (2 * std::sqrt(6.0))) <= 1e-15);
    for (int n = 3; n <= 31; n += 2) {
      CHECK(upper_bound_facet_parallel(n) > closed_form({n, n - 1, std::sqrt(2.0)}).value);
    }
    for (int n = 2; n <= 30; n += 2) {
      CHECK(std::abs(upper_bound_facet_parallel(n) - closed_form({n, n - 1, std::sqrt(2.0)}).value) <= 1e-14);
    }
  }
}
