#include "outer_radii/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numeric>

#include "outer_radii/error.hpp"

namespace outer_radii {

Frame Frame::from_orthonormal(Eigen::MatrixXd columns, double tol) {
  const Eigen::MatrixXd gram = columns.transpose() * columns;
  const double dev = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (columns.cols() > 0 && dev > tol) {
    throw Error(ErrorKind::RankDeficient, "frame columns are not orthonormal (deviation " + std::to_string(dev) + ")");
  }
  Frame f;
  f.basis_ = std::move(columns);
  return f;
}

Polytope Polytope::from_vertices(std::vector<RealVec> vertices, std::optional<std::string> label) {
  if (vertices.empty()) throw Error(ErrorKind::InvalidInput, "polytope needs at least one vertex");
  const auto dim = vertices.front().size();
  if (dim == 0) throw Error(ErrorKind::InvalidInput, "vertices must have positive dimension");
  for (const auto& v : vertices) {
    if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "vertices have differing dimensions");
    if (!v.allFinite()) throw Error(ErrorKind::InvalidInput, "vertex coordinates must be finite");
  }
  return Polytope{std::move(vertices), std::move(label)};
}

namespace {

Eigen::MatrixXd difference_matrix(std::span<const RealVec> points) {
  const auto dim = points.front().size();
  Eigen::MatrixXd diffs(dim, static_cast<Eigen::Index>(points.size()) - 1);
  for (std::size_t i = 1; i < points.size(); ++i) diffs.col(static_cast<Eigen::Index>(i) - 1) = points[i] - points[0];
  return diffs;
}

int numerical_rank(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0) return 0;
  const double largest = singular_values.maxCoeff();
  if (largest <= 0.0) return 0;
  return static_cast<int>((singular_values.array() > kRankTol * largest).count());
}

}  // namespace

Frame orthonormalize(std::span<const RealVec> vectors) {
  if (vectors.empty()) return Frame(0);
  const auto dim = vectors.front().size();
  Eigen::MatrixXd m(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dim) throw Error(ErrorKind::DimensionMismatch, "frame vectors differ in dimension");
    m.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  if (numerical_rank(svd.singularValues()) < m.cols()) {
    throw Error(ErrorKind::RankDeficient, "vectors are linearly dependent");
  }
  // Modified Gram-Schmidt, two passes.
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index l = 0; l < k; ++l) m.col(k) -= m.col(l).dot(m.col(k)) * m.col(l);
    }
    m.col(k).normalize();
  }
  return Frame::from_orthonormal(std::move(m));
}

int affine_rank(std::span<const RealVec> points) {
  if (points.size() <= 1) return static_cast<int>(points.size());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(difference_matrix(points));
  return 1 + numerical_rank(svd.singularValues());
}

Eigen::MatrixXd affine_direction_basis(std::span<const RealVec> points) {
  if (points.empty()) return {};
  const auto dim = points.front().size();
  if (points.size() == 1) return Eigen::MatrixXd(dim, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(difference_matrix(points), Eigen::ComputeThinU);
  const int rank = numerical_rank(svd.singularValues());
  return svd.matrixU().leftCols(rank);
}

std::vector<RealVec> project_onto_complement(std::span<const RealVec> points, const Frame& axis) {
  std::vector<RealVec> out(points.begin(), points.end());
  if (axis.empty()) return out;
  const Eigen::MatrixXd& s = axis.matrix();
  for (auto& p : out) {
    if (p.size() != s.rows()) throw Error(ErrorKind::DimensionMismatch, "point and axis dimensions differ");
    p -= s * (s.transpose() * p);
  }
  return out;
}

Ball circumball(std::span<const RealVec> points) {
  Ball b;
  if (points.empty()) return b;
  b.center = points.front();
  if (points.size() > 1) {
    const Eigen::MatrixXd a = difference_matrix(points);
    const Eigen::MatrixXd gram = a.transpose() * a;
    const Eigen::VectorXd rhs = 0.5 * gram.diagonal();
    const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
    b.center += a * lambda;
  }
  for (const auto& p : points) b.radius = std::max(b.radius, (p - b.center).norm());
  b.support.resize(points.size());
  std::iota(b.support.begin(), b.support.end(), std::size_t{0});
  return b;
}

namespace {

class MoveToFront {
 public:
  MoveToFront(const std::vector<RealVec>& pts, std::size_t max_support)
      : pts_(pts), max_support_(max_support) {
    for (std::size_t i = 0; i < pts.size(); ++i) order_.push_back(i);
  }

  void prefer_first(std::size_t i) {
    order_.remove(i);
    order_.push_front(i);
  }

  Ball solve() {
    support_.clear();
    run(order_.end());
    return current_;
  }

 private:
  bool contains(const RealVec& p) const {
    if (current_.support.empty()) return false;
    return (p - current_.center).norm() <= current_.radius + 1e-12 * (1.0 + current_.radius);
  }

  void refresh() {
    if (support_.empty()) {
      current_ = Ball{};
      return;
    }
    std::vector<RealVec> sp;
    sp.reserve(support_.size());
    for (auto i : support_) sp.push_back(pts_[i]);
    current_ = circumball(sp);
    current_.support = support_;
  }

  void run(std::list<std::size_t>::iterator end) {
    refresh();
    if (support_.size() == max_support_) return;
    for (auto it = order_.begin(); it != end;) {
      auto next = std::next(it);
      const std::size_t i = *it;
      if (!contains(pts_[i])) {
        support_.push_back(i);
        run(it);
        support_.pop_back();
        order_.splice(order_.begin(), order_, it);
      }
      it = next;
    }
  }

  const std::vector<RealVec>& pts_;
  std::size_t max_support_;
  std::list<std::size_t> order_;
  std::vector<std::size_t> support_;
  Ball current_;
};

}  // namespace

Ball min_enclosing_ball(std::span<const RealVec> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "min_enclosing_ball needs at least one point");
  const auto dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorKind::DimensionMismatch, "points differ in dimension");
  }

  std::vector<std::size_t> perm(points.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(points[a].data(), points[a].data() + dim, points[b].data(),
                                        points[b].data() + dim);
  });
  std::vector<RealVec> sorted;
  sorted.reserve(points.size());
  for (auto i : perm) sorted.push_back(points[i]);

  MoveToFront mtf(sorted, static_cast<std::size_t>(dim) + 1);
  Ball ball = mtf.solve();
  // Floating-point Welzl can occasionally miss a point; pivot it to the front and rerun.
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::size_t worst = 0;
    double excess = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double e = (sorted[i] - ball.center).norm() - ball.radius;
      if (e > excess) {
        excess = e;
        worst = i;
      }
    }
    if (excess <= kEnclosureTol) break;
    mtf.prefer_first(worst);
    ball = mtf.solve();
  }

  for (auto& s : ball.support) s = perm[s];
  std::sort(ball.support.begin(), ball.support.end());
  return ball;
}

}  // namespace outer_radii
