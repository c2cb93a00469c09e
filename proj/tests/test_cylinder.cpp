#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "outer_radii/cylinder.hpp"
#include "outer_radii/error.hpp"
#include "outer_radii/search.hpp"
#include "outer_radii/simplex_radii.hpp"

using namespace outer_radii;

namespace {

Polytope unit_square() {
  return Polytope::from_vertices({RealVec::Zero(2), RealVec::Unit(2, 0), RealVec::Ones(2), RealVec::Unit(2, 1)});
}

Frame frame_of(std::vector<RealVec> vs) { return orthonormalize(vs); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_SUITE("cylinder") {
  TEST_CASE("radius of the standard triangle along a fixed axis") {
    const Polytope t2 = standard_embedding(2);
    const Frame axis = frame_of({(RealVec(3) << 1, -1, 0).finished()});
    const Cylinder c = cylinder_radius(t2, axis);
    CHECK(c.radius == doctest::Approx(3 / (2 * std::sqrt(6.0))).epsilon(1e-14));
    CHECK(std::abs(c.base_point.dot(axis.vector(0))) <= 1e-10);
  }

  TEST_CASE("unit square with a horizontal axis is a slab of half-width one half") {
    const Cylinder c = cylinder_radius(unit_square(), frame_of({RealVec::Unit(2, 0)}));
    CHECK(c.radius == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("empty axis gives the circumradius") {
    const Cylinder c = cylinder_radius(standard_embedding(3), Frame(4));
    CHECK(c.radius == doctest::Approx(std::sqrt(3.0 / 4.0)).epsilon(1e-14));
  }

  TEST_CASE("cylinder radius rejects frames that do not fit") {
    CHECK(kind_of([] { cylinder_radius(unit_square(), Frame(3)); }) == ErrorKind::DimensionMismatch);
    const Frame full = frame_of({RealVec::Unit(2, 0), RealVec::Unit(2, 1)});
    CHECK(kind_of([&] { cylinder_radius(unit_square(), full); }) == ErrorKind::DimensionMismatch);
  }

  TEST_CASE("every projection gives an enclosing radius at least the true one") {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 5; ++n) {
      const Polytope t = standard_embedding(n);
      for (int j = 1; j <= n; ++j) {
        const double truth = oracle::regular_radius_edge_sqrt2(n, j);
        for (int s = 0; s < 5; ++s) {
          // Random frames inside the hyperplane of the simplex.
          auto dirs = oracle::gaussian_points(n - j, n + 1, rng);
          for (auto& d : dirs) d.array() -= d.mean();
          const Frame axis = n - j == 0 ? Frame(n + 1) : orthonormalize(dirs);
          const Cylinder c = cylinder_radius(t, axis);
          for (double d : axis_distances(t, c)) CHECK(d <= c.radius + 1e-9);
          if (std::isfinite(truth)) CHECK(c.radius >= truth - 1e-9);
        }
      }
    }
  }

  TEST_CASE("radius is invariant under rigid motions and scales linearly") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
      const int dim = 2 + t % 3;
      const auto pts = oracle::gaussian_points(dim + 2, dim, rng);
      const Frame axis = orthonormalize(oracle::gaussian_points(1 + t % (dim - 1), dim, rng));
      const double base = cylinder_radius(Polytope::from_vertices(pts), axis).radius;

      const Eigen::MatrixXd q = oracle::random_orthogonal(dim, rng);
      const RealVec shift = oracle::gaussian_points(1, dim, rng).front() * 10.0;
      std::vector<RealVec> moved;
      for (const auto& p : pts) moved.push_back(q * p + shift);
      const Frame moved_axis = Frame::from_orthonormal(q * axis.matrix(), 1e-10);
      CHECK(std::abs(cylinder_radius(Polytope::from_vertices(moved), moved_axis).radius - base) <= 1e-9);

      const double lambda = 0.1 + 0.7 * t;
      std::vector<RealVec> scaled;
      for (const auto& p : pts) scaled.push_back(lambda * p);
      CHECK(std::abs(cylinder_radius(Polytope::from_vertices(scaled), axis).radius - lambda * base) <=
            1e-9 * (1 + lambda));
    }
  }

  TEST_CASE("minimal cylinder of the regular tetrahedron touches every vertex") {
    const Polytope t3 = standard_embedding(3);
    SearchConfig cfg;
    cfg.threads = 1;
    const auto res = minimize_rj(t3, 2, cfg);
    const TouchReport r = touching_set(t3, res.best, 1e-6);
    CHECK(r.touching.size() == 4);
    CHECK(r.nu == 4);
    CHECK(r.dimension == 3);
    CHECK(r.touch_case == TouchCase::CaseA);
    const auto par = facet_parallelism_check(t3, res.best, 1e-6);
    CHECK(std::all_of(par.begin(), par.end(), [](bool b) { return b; }));
  }

  TEST_CASE("unit square in its width direction touches all four vertices") {
    const Polytope sq = unit_square();
    const Cylinder c = cylinder_radius(sq, frame_of({RealVec::Unit(2, 0)}));
    const TouchReport r = touching_set(sq, c, 1e-12);
    CHECK(r.touching.size() == 4);
    CHECK(r.nu == 3);
    CHECK(r.touch_case == TouchCase::CaseA);
  }

  TEST_CASE("touching set rejects cylinders that do not enclose") {
    Cylinder c = cylinder_radius(unit_square(), frame_of({RealVec::Unit(2, 0)}));
    c.radius = 0.4;
    CHECK(kind_of([&] { touching_set(unit_square(), c, 1e-9); }) == ErrorKind::NotEnclosing);
  }

  TEST_CASE("the bound n-j+2 is attained by an elongated simplex") {
    // A triangle of width sqrt(3)/2 in the plane z = 0 and a fourth vertex
    // inside the slab around its width line; R_2 equals R_1 of the triangle.
    const double h = std::sqrt(3.0) / 2;
    const Polytope s = Polytope::from_vertices({(RealVec(3) << 0, 0, 0).finished(), (RealVec(3) << 1, 0, 0).finished(),
                                                (RealVec(3) << 0.5, h, 0).finished(),
                                                (RealVec(3) << 0.5, h / 2, 0.2).finished()});
    SearchConfig cfg;
    cfg.threads = 1;
    const auto res = minimize_rj(s, 2, cfg);
    CHECK(res.best.radius == doctest::Approx(h / 2).epsilon(1e-9));
    const TouchReport r = touching_set(s, res.best, 1e-6);
    CHECK(r.nu == 3);
    CHECK(r.touching == std::vector<std::size_t>{0, 1, 2});
    CHECK(r.touch_case == TouchCase::CaseB);
    CHECK(r.hyperplane == std::vector<std::size_t>{0, 1, 2});
    // The untouched vertex sees an axis parallel to its opposite facet.
    const auto par = facet_parallelism_check(s, res.best, 1e-6);
    CHECK(par[3]);
  }

  TEST_CASE("non-minimal axis is flagged as not parallel") {
    std::mt19937_64 rng(41);
    bool found = false;
    for (int t = 0; t < 200 && !found; ++t) {
      const Polytope s = Polytope::from_vertices(oracle::random_simplex(3, rng));
      const Frame axis = orthonormalize(oracle::gaussian_points(1, 3, rng));
      const Cylinder c = cylinder_radius(s, axis);
      const auto dist = axis_distances(s, c);
      if (std::abs(dist[1] - c.radius) < 1e-3) continue;
      // Normal of the facet opposite vertex 1.
      const RealVec a = s.vertices[2] - s.vertices[0];
      const RealVec b = s.vertices[3] - s.vertices[0];
      const Eigen::Vector3d normal = Eigen::Vector3d(a).cross(Eigen::Vector3d(b)).normalized();
      if (std::abs(normal.dot(axis.vector(0))) < 0.1) continue;
      found = true;
      const auto par = facet_parallelism_check(s, c, 1e-6);
      CHECK_FALSE(par[1]);
    }
    CHECK(found);
  }

  TEST_CASE("minimal 1-cylinders of tetrahedra are parallel to the facets of untouched vertices") {
    std::mt19937_64 rng(8);
    SearchConfig cfg;
    cfg.threads = 1;
    int checked = 0;
    for (int t = 0; t < 40 && checked < 3; ++t) {
      const Polytope s = Polytope::from_vertices(oracle::random_simplex(3, rng));
      cfg.seed = static_cast<std::uint64_t>(t);
      const auto res = minimize_rj(s, 2, cfg);
      const TouchReport r = touching_set(s, res.best, 1e-6);
      if (r.touching.size() == 4) continue;
      ++checked;
      const auto par = facet_parallelism_check(s, res.best, 1e-5);
      for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i]);
    }
    CHECK(checked > 0);
  }

  TEST_CASE("facet check needs a simplex") {
    const Cylinder c = cylinder_radius(unit_square(), frame_of({RealVec::Unit(2, 0)}));
    CHECK(kind_of([&] { facet_parallelism_check(unit_square(), c, 1e-9); }) == ErrorKind::NotASimplex);
  }

  TEST_CASE("case b recursion on a facet of the regular simplex") {
    SearchConfig cfg;
    cfg.threads = 1;
    struct Row {
      int n, j;
    };
    for (const Row row : {Row{4, 2}, Row{4, 3}, Row{5, 3}, Row{6, 4}}) {
      const Polytope t = standard_embedding(row.n);
      std::vector<std::size_t> facet;
      for (int i = 0; i < row.n; ++i) facet.push_back(static_cast<std::size_t>(i));
      const double expected = oracle::regular_radius_edge_sqrt2(row.n - 1, row.j - 1);
      CHECK(case_b_recursion(t, facet, row.j, cfg) == doctest::Approx(expected).epsilon(1e-7));
      CHECK(expected == doctest::Approx(std::sqrt((row.j - 1.0) / row.n)).epsilon(1e-15));
    }
  }

  TEST_CASE("case b recursion rejects j = 1 and non-hyperplanes") {
    const Polytope t = standard_embedding(3);
    CHECK(kind_of([&] { case_b_recursion(t, {0, 1, 2}, 1, SearchConfig{}); }) == ErrorKind::InvalidJ);
    CHECK(kind_of([&] { case_b_recursion(t, {0, 1}, 2, SearchConfig{}); }) == ErrorKind::NotAHyperplane);
    const Polytope segment = Polytope::from_vertices({RealVec::Zero(2), RealVec::Unit(2, 0)});
    CHECK(kind_of([&] { case_b_recursion(segment, {0}, 2, SearchConfig{}); }) == ErrorKind::InvalidJ);
  }
}
