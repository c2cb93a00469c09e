#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "outer_radii/error.hpp"
#include "outer_radii/search.hpp"
#include "outer_radii/simplex_radii.hpp"

using namespace outer_radii;

namespace {

SearchConfig serial(int starts = 0, std::uint64_t seed = 0) {
  SearchConfig cfg;
  cfg.starts = starts;
  cfg.seed = seed;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("random frames") {
    CHECK(random_frame(3, 0, 5).empty());
    const Frame full = random_frame(3, 3, 5);
    const Eigen::MatrixXd gram = full.matrix().transpose() * full.matrix();
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    const Frame a = random_frame(6, 2, 1234);
    const Frame b = random_frame(6, 2, 1234);
    CHECK(a.matrix() == b.matrix());
    CHECK(random_frame(6, 2, 1235).matrix() != a.matrix());
    CHECK_THROWS_AS(random_frame(2, 3, 0), Error);
  }

  TEST_CASE("default number of starts") {
    CHECK(default_starts(4, 3) == 32);
    CHECK(default_starts(6, 1) == 96);
  }

  TEST_CASE("local refinement keeps an optimal frame") {
    const Polytope sq =
        Polytope::from_vertices({RealVec::Zero(2), RealVec::Unit(2, 0), RealVec::Ones(2), RealVec::Unit(2, 1)});
    const Frame opt = orthonormalize(std::vector<RealVec>{RealVec::Unit(2, 0)});
    const Frame out = local_refine(sq, opt, serial());
    CHECK(cylinder_radius(sq, out).radius <= 0.5 + 1e-15);
  }

  TEST_CASE("local refinement never increases the radius") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
      const Polytope s = Polytope::from_vertices(oracle::random_simplex(3, rng));
      const Frame start = random_frame(3, 1 + t % 2, static_cast<std::uint64_t>(t));
      const double before = cylinder_radius(s, start).radius;
      const Frame out = local_refine(s, start, serial(0, static_cast<std::uint64_t>(t)));
      CHECK(cylinder_radius(s, out).radius <= before + 1e-15);
    }
  }

  TEST_CASE("unit square, j = 1") {
    const Polytope sq =
        Polytope::from_vertices({RealVec::Zero(2), RealVec::Unit(2, 0), RealVec::Ones(2), RealVec::Unit(2, 1)});
    const auto res = minimize_rj(sq, 1, serial());
    CHECK(std::abs(res.best.radius - 0.5) <= 1e-9);
  }

  TEST_CASE("regular tetrahedron, j = 2, 32 starts") {
    const auto res = minimize_rj(standard_embedding(3), 2, serial(32));
    CHECK(std::abs(res.best.radius - std::sqrt(0.5)) <= 1e-6);
    CHECK(res.starts == 32);
    CHECK(res.converged_starts >= 1);
  }

  TEST_CASE("regular 4-simplex, j = 3, 64 starts") {
    const auto res = minimize_rj(standard_embedding(4), 3, serial(64));
    CHECK(std::abs(res.best.radius - 7 / (2 * std::sqrt(20.0))) <= 1e-5);
  }

  TEST_CASE("regular 5-simplex, j = 4") {
    const auto res = minimize_rj(standard_embedding(5), 4, serial());
    CHECK(std::abs(res.best.radius - std::sqrt(4.0 / 6.0)) <= 1e-5);
  }

  TEST_CASE("j = n gives the circumradius with an empty frame") {
    std::mt19937_64 rng(4);
    const auto pts = oracle::gaussian_points(7, 3, rng);
    const auto res = minimize_rj(Polytope::from_vertices(pts), 3, serial());
    CHECK(res.best.axis.empty());
    CHECK(std::abs(res.best.radius - oracle::brute_force_ball(pts).radius) <= 1e-9);
  }

  TEST_CASE("invalid j") {
    const Polytope t = standard_embedding(3);
    for (int j : {0, 4, -1}) {
      try {
        minimize_rj(t, j, serial());
        FAIL("expected InvalidJ");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidJ);
      }
    }
  }

  TEST_CASE("frames for the standard embedding stay orthogonal to the all-ones vector") {
    const auto res = minimize_rj(standard_embedding(4), 2, serial());
    const RealVec ones = RealVec::Ones(5);
    for (int k = 0; k < res.best.axis.count(); ++k) CHECK(std::abs(res.best.axis.vector(k).dot(ones)) <= 1e-10);
  }

  TEST_CASE("history is non-increasing and the best is the minimum over starts") {
    std::mt19937_64 rng(77);
    const Polytope s = Polytope::from_vertices(oracle::random_simplex(4, rng));
    const auto res = minimize_rj(s, 2, serial(12, 3));
    for (std::size_t i = 1; i < res.objective_history.size(); ++i) {
      CHECK(res.objective_history[i] <= res.objective_history[i - 1]);
    }
    const double lowest = *std::min_element(res.start_radii.begin(), res.start_radii.end());
    CHECK(std::abs(res.best.radius - lowest) <= 1e-12);
  }

  TEST_CASE("computed radii are monotone in j") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 3; ++t) {
      const auto pts = oracle::gaussian_points(7, 4, rng);
      const Polytope p = Polytope::from_vertices(pts);
      double prev = 0.0;
      for (int j = 1; j <= 4; ++j) {
        const double r = minimize_rj(p, j, serial()).best.radius;
        CHECK(r >= prev - 2e-5);
        prev = r;
      }
    }
  }

  TEST_CASE("lower bound for the regular simplex") {
    for (int n = 2; n <= 5; ++n) {
      for (int j = 1; j <= n; ++j) {
        const auto res = minimize_rj(standard_embedding(n), j, serial(8));
        CHECK(res.best.radius >= std::sqrt(j / (n + 1.0)) - 1e-6);
      }
    }
  }

  TEST_CASE("serial and threaded runs agree bitwise") {
    std::mt19937_64 rng(5);
    const Polytope s = Polytope::from_vertices(oracle::random_simplex(4, rng));
    SearchConfig one = serial(16, 9);
    SearchConfig many = one;
    many.threads = 4;
    const auto a = minimize_rj(s, 2, one);
    const auto b = minimize_rj(s, 2, many);
    CHECK(a.best.radius == b.best.radius);
    CHECK(a.best.axis.matrix() == b.best.axis.matrix());
    CHECK(a.start_radii == b.start_radii);
    CHECK(a.objective_history == b.objective_history);
    const auto c = minimize_rj(s, 2, one);
    CHECK(c.best.base_point == a.best.base_point);
  }

  TEST_CASE("radius is invariant under a rigid motion of the polytope") {
    std::mt19937_64 rng(23);
    const auto pts = oracle::random_simplex(3, rng);
    const Eigen::MatrixXd q = oracle::random_orthogonal(3, rng);
    std::vector<RealVec> moved;
    for (const auto& p : pts) moved.push_back(q * p + RealVec::Constant(3, 2.5));
    for (int j = 1; j <= 2; ++j) {
      const double a = minimize_rj(Polytope::from_vertices(pts), j, serial()).best.radius;
      const double b = minimize_rj(Polytope::from_vertices(moved), j, serial()).best.radius;
      CHECK(std::abs(a - b) <= 1e-7);
    }
  }

  TEST_CASE("width of a tetrahedron matches facet-vertex and edge-edge enumeration") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 15; ++t) {
      const auto v = oracle::random_simplex(3, rng);
      double width = std::numeric_limits<double>::infinity();
      auto slab = [&](const Eigen::Vector3d& dir) {
        double lo = 1e300, hi = -1e300;
        for (const auto& p : v) {
          lo = std::min(lo, dir.dot(Eigen::Vector3d(p)));
          hi = std::max(hi, dir.dot(Eigen::Vector3d(p)));
        }
        return hi - lo;
      };
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          int c = 0;
          while (c == a || c == b) ++c;
          int d = 6 - a - b - c;
          const Eigen::Vector3d e1 = v[b] - v[a], e2 = v[d] - v[c];
          width = std::min(width, slab(e1.cross(e2).normalized()));
        }
        std::vector<int> f;
        for (int i = 0; i < 4; ++i) {
          if (i != a) f.push_back(i);
        }
        const Eigen::Vector3d n = Eigen::Vector3d(v[f[1]] - v[f[0]]).cross(Eigen::Vector3d(v[f[2]] - v[f[0]]));
        width = std::min(width, slab(n.normalized()));
      }
      const auto res = minimize_rj(Polytope::from_vertices(v), 1, serial(0, static_cast<std::uint64_t>(t)));
      CHECK(std::abs(res.best.radius - width / 2) <= 1e-9);
    }
  }
}
