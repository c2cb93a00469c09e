#include "outer_radii/sym_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "outer_radii/error.hpp"

namespace outer_radii {

std::vector<Multiplicity> enumerate_triples(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be >= 2");
  std::vector<Multiplicity> out;
  out.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int k1 = 1; k1 <= n; ++k1) {
    for (int k2 = 1; k1 + k2 <= n + 1; ++k2) out.push_back({k1, k2, n + 1 - k1 - k2});
  }
  return out;
}

std::array<double, 3> ks_from_s(double s1, double s2, double s3) {
  constexpr double eps = 1e-12;
  if (std::abs(s1) <= eps || std::abs(s2) <= eps || std::abs(s3) <= eps || std::abs(s1 - s2) <= eps ||
      std::abs(s1 - s3) <= eps || std::abs(s2 - s3) <= eps) {
    throw Error(ErrorKind::DegenerateValues, "values must be pairwise distinct and nonzero");
  }
  return {(s2 + s3) / (-s1 * (s2 - s1) * (s3 - s1)), (s1 + s3) / (s2 * (s2 - s1) * (s3 - s2)),
          -(s1 + s2) / (s3 * (s3 - s1) * (s3 - s2))};
}

double s2_from(double s1, double s3, int n) {
  const double den = (n + 1.0) * s1 * s3 + 1.0;
  if (std::abs(den) <= 1e-12) throw Error(ErrorKind::SingularDenominator, "(n+1) s1 s3 + 1 vanishes");
  return -(s1 + s3) / den;
}

SymSolution make_solution(int n, const Multiplicity& k, const std::array<double, 3>& s) {
  SymSolution sol;
  sol.k = k;
  sol.s = s;
  for (int r = 0; r < 3; ++r) sol.full_vector.insert(sol.full_vector.end(), static_cast<std::size_t>(k[r]), s[r]);
  if (static_cast<int>(sol.full_vector.size()) != n + 1) {
    throw Error(ErrorKind::MalformedSolution, "multiplicities do not sum to n + 1");
  }
  std::sort(sol.full_vector.begin(), sol.full_vector.end(), std::greater<>());
  long double p1 = 0, p2 = 0, p3 = 0, p4 = 0;
  for (double v : sol.full_vector) {
    const long double x = v;
    p1 += x;
    p2 += x * x;
    p3 += x * x * x;
    p4 += x * x * x * x;
  }
  sol.objective = static_cast<double>(p4);
  sol.residuals = {static_cast<double>(p3), static_cast<double>(p2 - 1.0L), static_cast<double>(p1)};
  return sol;
}

namespace {

bool residuals_ok(const SymSolution& sol) {
  return std::all_of(sol.residuals.begin(), sol.residuals.end(), [](double r) { return std::abs(r) <= kResidualTol; });
}

// Directions (cos t, sin t), t in [0, pi), where c0 a^3 + c1 a^2 b + c2 a b^2 + c3 b^3 vanishes.
// Double roots are taken from the derivative, where they are simple and
// can be found to full precision; eigenvalues near them are dropped.
std::vector<double> binary_cubic_angles(std::array<double, 4> c) {
  const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
  if (scale == 0.0) return {};
  for (auto& x : c) x /= scale;

  auto g_at = [&](double th) {
    const double a = std::cos(th), b = std::sin(th);
    return c[0] * a * a * a + c[1] * a * a * b + c[2] * a * b * b + c[3] * b * b * b;
  };
  // d/dth with da = -b, db = a
  auto dg_at = [&](double th) {
    const double a = std::cos(th), b = std::sin(th);
    return -3 * c[0] * a * a * b + c[1] * (a * a * a - 2 * a * b * b) + c[2] * (2 * a * a * b - b * b * b) +
           3 * c[3] * a * b * b;
  };
  auto ddg_at = [&](double th) {
    const double h = 1e-5;
    return (dg_at(th + h) - dg_at(th - h)) / (2 * h);
  };
  auto newton = [](double th, auto&& f, auto&& df) {
    for (int it = 0; it < 30; ++it) {
      const double d = df(th);
      if (d == 0.0) break;
      const double step = f(th) / d;
      th -= step;
      if (std::abs(step) < 1e-17) break;
    }
    return th;
  };

  // Double roots: zeros of the derivative p'(t) = c1 + 2 c2 t + 3 c3 t^2
  // of p(t) = g(1, t), plus the vertical direction when b^2 divides g.
  std::vector<double> doubles;
  auto try_double = [&](double th) {
    th = newton(th, dg_at, ddg_at);
    if (std::abs(g_at(th)) <= 1e-10) doubles.push_back(th);
  };
  if (std::abs(c[3]) <= 1e-12 && std::abs(c[2]) <= 1e-12) {
    try_double(std::numbers::pi / 2.0);
  }
  {
    const double qa = 3 * c[3], qb = 2 * c[2], qc = c[1];
    if (std::abs(qa) > 1e-12) {
      const double disc = qb * qb - 4 * qa * qc;
      if (disc >= -1e-10) {
        const double r = std::sqrt(std::max(disc, 0.0));
        try_double(std::atan((-qb + r) / (2 * qa)));
        if (r > 0) try_double(std::atan((-qb - r) / (2 * qa)));
      }
    } else if (std::abs(qb) > 1e-12) {
      try_double(std::atan(-qc / qb));
    }
  }

  std::vector<double> slopes;  // roots t = b / a
  std::vector<double> angles;
  auto real_roots = [&](int degree) {
    // Monic companion matrix of c[degree] t^degree + ... + c[0].
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -c[i] / c[degree];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < degree; ++i) {
      const auto z = es.eigenvalues()[i];
      if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z.real()))) slopes.push_back(z.real());
    }
  };
  if (std::abs(c[3]) > 1e-12) {
    real_roots(3);
  } else {
    angles.push_back(std::numbers::pi / 2.0);
    if (std::abs(c[2]) > 1e-12) {
      real_roots(2);
    } else if (std::abs(c[1]) > 1e-12) {
      slopes.push_back(-c[0] / c[1]);
    }
  }
  for (double t : slopes) angles.push_back(std::atan(t));

  auto angle_gap = [](double x, double y) {
    const double d = std::fmod(std::abs(x - y), std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
  };
  std::vector<double> out = doubles;
  for (double th : angles) {
    const bool near_double =
        std::any_of(doubles.begin(), doubles.end(), [&](double d) { return angle_gap(th, d) < 1e-3; });
    if (!near_double) out.push_back(newton(th, g_at, dg_at));
  }
  return out;
}

// Newton on the three moment equations for the roles with k > 0.
void polish_roots(const Multiplicity& k, std::array<double, 3>& s) {
  for (int it = 0; it < 6; ++it) {
    Eigen::Vector3d f = Eigen::Vector3d::Zero();
    Eigen::Matrix3d jac;
    for (int r = 0; r < 3; ++r) {
      f[0] += k[r] * s[r] * s[r] * s[r];
      f[1] += k[r] * s[r] * s[r];
      f[2] += k[r] * s[r];
      jac(0, r) = 3.0 * k[r] * s[r] * s[r];
      jac(1, r) = 2.0 * k[r] * s[r];
      jac(2, r) = k[r];
    }
    f[1] -= 1.0;
    if (f.cwiseAbs().maxCoeff() < 1e-16) return;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(jac);
    if (lu.rank() < 3) return;
    const Eigen::Vector3d d = lu.solve(-f);
    std::array<double, 3> next = s;
    for (int r = 0; r < 3; ++r) next[r] += d[r];
    // Near coinciding values the Jacobian is almost singular; keep only
    // steps that reduce the residual.
    double before = f.cwiseAbs().maxCoeff(), after = 0.0;
    {
      double m3 = 0, m2 = -1, m1 = 0;
      for (int r = 0; r < 3; ++r) {
        m3 += k[r] * next[r] * next[r] * next[r];
        m2 += k[r] * next[r] * next[r];
        m1 += k[r] * next[r];
      }
      after = std::max({std::abs(m3), std::abs(m2), std::abs(m1)});
    }
    if (!(after < before)) return;
    s = next;
  }
}

void normalize_sign(std::array<double, 3>& s, const Multiplicity& k) {
  for (auto& x : s) {
    if (std::abs(x) < 1e-14) x = 0.0;
  }
  for (int r = 0; r < 3; ++r) {
    if (k[r] == 0 || s[r] == 0.0) continue;
    if (s[r] > 0.0) {
      for (auto& x : s) x = -x;
    }
    return;
  }
}

// Merges roles with equal values and orders the distinct values ascending;
// a two-valued solution gets k3 = 0.
SymSolution canonical(int n, const SymSolution& sol) {
  std::vector<std::pair<double, int>> roles;
  for (int r = 0; r < 3; ++r) {
    if (sol.k[r] == 0) continue;
    auto it = std::find_if(roles.begin(), roles.end(),
                           [&](const auto& e) { return std::abs(e.first - sol.s[r]) <= 1e-6; });
    if (it == roles.end()) {
      roles.emplace_back(sol.s[r], sol.k[r]);
    } else {
      it->second += sol.k[r];
    }
  }
  std::sort(roles.begin(), roles.end());
  Multiplicity k{0, 0, 0};
  std::array<double, 3> s{0.0, 0.0, 0.0};
  for (std::size_t r = 0; r < roles.size(); ++r) {
    s[r] = roles[r].first;
    k[r] = roles[r].second;
  }
  // Merged values came from a double root; re-solve them exactly.
  if (roles.size() == 2 && k[0] == k[1]) {
    const double a = 1.0 / std::sqrt(2.0 * k[0]);
    s = {-a, a, 0.0};
  } else if (roles.size() == 3) {
    polish_roots(k, s);
  }
  return make_solution(n, k, s);
}

}  // namespace

std::vector<SymSolution> solve_triple(int n, const Multiplicity& k) {
  if (k[0] < 1 || k[1] < 1 || k[2] < 0 || k[0] + k[1] + k[2] != n + 1) {
    throw Error(ErrorKind::InvalidInput, "invalid multiplicity triple");
  }
  std::vector<SymSolution> out;
  auto accept = [&](const SymSolution& sol) {
    if (!residuals_ok(sol)) return;
    for (const auto& other : out) {
      double diff = 0.0;
      for (int r = 0; r < 3; ++r) {
        if (k[r] > 0) diff = std::max(diff, std::abs(other.s[r] - sol.s[r]));
      }
      if (diff <= 1e-8) return;
    }
    out.push_back(sol);
  };

  if (k[2] == 0) {
    // Two values: the first and third moments force k1 = k2 and s2 = -s1.
    if (k[0] != k[1]) return out;
    const double a = 1.0 / std::sqrt(2.0 * k[0]);
    accept(make_solution(n, k, {-a, a, 0.0}));
    return out;
  }

  // The first and third moment equations are homogeneous: on the plane
  // k . s = 0 the cubic moment is a binary cubic form whose zero directions,
  // scaled to unit second moment, are exactly the solutions.
  Eigen::Vector3d u(k[1], -k[0], 0.0);
  Eigen::Vector3d w(k[2], 0.0, -k[0]);
  u.normalize();
  w -= u.dot(w) * u;
  w.normalize();
  std::array<double, 4> c{};
  for (int r = 0; r < 3; ++r) {
    c[0] += k[r] * u[r] * u[r] * u[r];
    c[1] += 3.0 * k[r] * u[r] * u[r] * w[r];
    c[2] += 3.0 * k[r] * u[r] * w[r] * w[r];
    c[3] += k[r] * w[r] * w[r] * w[r];
  }
  for (double th : binary_cubic_angles(c)) {
    const Eigen::Vector3d d = std::cos(th) * u + std::sin(th) * w;
    double q = 0.0;
    for (int r = 0; r < 3; ++r) q += k[r] * d[r] * d[r];
    std::array<double, 3> s{d[0] / std::sqrt(q), d[1] / std::sqrt(q), d[2] / std::sqrt(q)};
    polish_roots(k, s);
    normalize_sign(s, k);
    accept(make_solution(n, k, s));
  }
  return out;
}

SymSolution solve_full(int n) {
  SymSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  for (const auto& k : enumerate_triples(n)) {
    for (auto& sol : solve_triple(n, k)) {
      if (sol.objective < best.objective - 1e-13) best = std::move(sol);
    }
  }
  return canonical(n, best);
}

std::vector<SymSolution> optimal_solutions(int n, double tol) {
  std::vector<SymSolution> all;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& k : enumerate_triples(n)) {
    for (auto& sol : solve_triple(n, k)) {
      best = std::min(best, sol.objective);
      all.push_back(std::move(sol));
    }
  }
  std::vector<SymSolution> out;
  for (auto& sol : all) {
    if (sol.objective > best + tol) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const SymSolution& o) {
      for (std::size_t i = 0; i < o.full_vector.size(); ++i) {
        if (std::abs(o.full_vector[i] - sol.full_vector[i]) > 1e-8) return false;
      }
      return true;
    });
    if (!dup) out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace outer_radii
