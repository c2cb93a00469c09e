#include "outer_radii/cylinder.hpp"

#include <algorithm>
#include <cmath>

#include "outer_radii/error.hpp"
#include "outer_radii/search.hpp"

namespace outer_radii {

const char* to_string(TouchCase c) {
  switch (c) {
    case TouchCase::CaseA: return "CaseA";
    case TouchCase::CaseB: return "CaseB";
    case TouchCase::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

Cylinder cylinder_radius(const Polytope& polytope, const Frame& axis) {
  const int dim = polytope.ambient_dim();
  if (axis.dim() != 0 && axis.dim() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "axis dimension differs from the polytope's");
  }
  if (axis.count() > dim - 1) throw Error(ErrorKind::DimensionMismatch, "axis has too many directions");
  const auto projected = project_onto_complement(polytope.vertices, axis);
  Ball ball = min_enclosing_ball(projected);
  return Cylinder{std::move(ball.center), axis.empty() ? Frame(dim) : axis, ball.radius};
}

std::vector<double> axis_distances(const Polytope& polytope, const Cylinder& cyl) {
  const auto projected = project_onto_complement(polytope.vertices, cyl.axis);
  std::vector<double> d;
  d.reserve(projected.size());
  for (const auto& q : projected) d.push_back((q - cyl.base_point).norm());
  return d;
}

TouchReport touching_set(const Polytope& polytope, const Cylinder& cyl, double tol) {
  const auto dist = axis_distances(polytope, cyl);
  TouchReport report;
  report.dimension = affine_rank(polytope.vertices) - 1;
  std::vector<RealVec> touching_pts;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] > cyl.radius + tol) {
      throw Error(ErrorKind::NotEnclosing, "vertex " + std::to_string(i) + " lies outside the cylinder by " +
                                               std::to_string(dist[i] - cyl.radius));
    }
    const double gap = std::abs(dist[i] - cyl.radius);
    if (gap <= tol) {
      report.touching.push_back(i);
      touching_pts.push_back(polytope.vertices[i]);
      report.max_gap = std::max(report.max_gap, gap);
    }
  }
  report.nu = affine_rank(touching_pts);

  const int n = report.dimension;
  if (report.nu >= n + 1) {
    report.touch_case = TouchCase::CaseA;
  } else if (report.nu == n && n >= 1) {
    // Every vertex lying in the hyperplane spanned by the touching ones.
    report.touch_case = TouchCase::CaseB;
    for (std::size_t i = 0; i < polytope.size(); ++i) {
      auto with_i = touching_pts;
      with_i.push_back(polytope.vertices[i]);
      if (affine_rank(with_i) == report.nu) report.hyperplane.push_back(i);
    }
  }
  return report;
}

namespace {

// Unit normal of the facet opposite `skip`, inside the direction space `dirs`.
RealVec facet_normal(const Polytope& simplex, std::size_t skip, const Eigen::MatrixXd& dirs) {
  const auto n = dirs.cols();
  Eigen::MatrixXd local(n, n - 1);
  const std::size_t base = skip == 0 ? 1 : 0;
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    if (i == skip || i == base) continue;
    local.col(col++) = dirs.transpose() * (simplex.vertices[i] - simplex.vertices[base]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(local, Eigen::ComputeFullU);
  return dirs * svd.matrixU().col(n - 1);
}

}  // namespace

std::vector<bool> facet_parallelism_check(const Polytope& simplex, const Cylinder& cyl, double tol) {
  const int rank = affine_rank(simplex.vertices);
  if (static_cast<std::size_t>(rank) != simplex.size() || simplex.size() < 2) {
    throw Error(ErrorKind::NotASimplex, "vertices are not affinely independent");
  }
  const Eigen::MatrixXd dirs = affine_direction_basis(simplex.vertices);
  const auto dist = axis_distances(simplex, cyl);
  std::vector<bool> out(simplex.size(), true);
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    if (std::abs(dist[i] - cyl.radius) <= tol || cyl.axis.empty()) continue;
    const RealVec normal = facet_normal(simplex, i, dirs);
    const double worst = (cyl.axis.matrix().transpose() * normal).cwiseAbs().maxCoeff();
    out[i] = worst <= tol;
  }
  return out;
}

double case_b_recursion(const Polytope& polytope, const std::vector<std::size_t>& hyperplane_vertices, int j,
                        const SearchConfig& cfg) {
  const int n = affine_rank(polytope.vertices) - 1;
  if (j < 2 || j > n) throw Error(ErrorKind::InvalidJ, "case b requires 2 <= j <= n");
  std::vector<RealVec> flat;
  for (auto i : hyperplane_vertices) {
    if (i >= polytope.size()) throw Error(ErrorKind::InvalidInput, "vertex index out of range");
    flat.push_back(polytope.vertices[i]);
  }
  if (flat.empty() || affine_rank(flat) != n) {
    throw Error(ErrorKind::NotAHyperplane, "vertices do not span a hyperplane of the polytope's hull");
  }

  // Normal of the hyperplane inside aff(P).
  const Eigen::MatrixXd dirs = affine_direction_basis(polytope.vertices);
  const Eigen::MatrixXd in_plane = affine_direction_basis(flat);
  Eigen::MatrixXd local = dirs.transpose() * in_plane;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(local, Eigen::ComputeFullU);
  const RealVec normal = dirs * svd.matrixU().col(n - 1);

  double scale = 1.0;
  for (const auto& v : polytope.vertices) scale = std::max(scale, (v - flat.front()).norm());
  const double tol = 1e-9 * scale;
  std::vector<double> side(polytope.size());
  for (std::size_t i = 0; i < polytope.size(); ++i) side[i] = normal.dot(polytope.vertices[i] - flat.front());

  // P ∩ H is the hull of the vertices on H and the crossing points of edges
  // between vertices on opposite sides.
  std::vector<RealVec> section;
  for (std::size_t a = 0; a < polytope.size(); ++a) {
    if (std::abs(side[a]) <= tol) section.push_back(polytope.vertices[a]);
  }
  for (std::size_t a = 0; a < polytope.size(); ++a) {
    for (std::size_t b = 0; b < polytope.size(); ++b) {
      if (side[a] > tol && side[b] < -tol) {
        const double t = side[a] / (side[a] - side[b]);
        section.push_back(polytope.vertices[a] + t * (polytope.vertices[b] - polytope.vertices[a]));
      }
    }
  }
  const auto sub = Polytope::from_vertices(std::move(section));
  return minimize_rj(sub, j - 1, cfg).best.radius;
}

}  // namespace outer_radii
