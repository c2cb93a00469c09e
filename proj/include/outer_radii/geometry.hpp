#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace outer_radii {

using RealVec = Eigen::VectorXd;

inline constexpr double kRankTol = 1e-10;
inline constexpr double kOrthoTol = 1e-12;
inline constexpr double kEnclosureTol = 1e-9;

/// Ordered orthonormal directions in an ambient space, stored as the
/// columns of a dim x count matrix.
class Frame {
 public:
  Frame() = default;
  explicit Frame(int dim) : basis_(dim, 0) {}

  /// Wraps columns that are already orthonormal. Throws RankDeficient if
  /// the Gram matrix deviates from the identity by more than `tol`.
  static Frame from_orthonormal(Eigen::MatrixXd columns, double tol = kOrthoTol);

  int dim() const { return static_cast<int>(basis_.rows()); }
  int count() const { return static_cast<int>(basis_.cols()); }
  bool empty() const { return basis_.cols() == 0; }
  const Eigen::MatrixXd& matrix() const { return basis_; }
  RealVec vector(int k) const { return basis_.col(k); }

 private:
  Eigen::MatrixXd basis_;
};

struct Polytope {
  std::vector<RealVec> vertices;
  std::optional<std::string> label;

  /// Validates that there is at least one vertex, all share a dimension
  /// and every coordinate is finite.
  static Polytope from_vertices(std::vector<RealVec> vertices,
                                std::optional<std::string> label = std::nullopt);

  int ambient_dim() const { return vertices.empty() ? 0 : static_cast<int>(vertices.front().size()); }
  std::size_t size() const { return vertices.size(); }
};

struct Ball {
  RealVec center;
  double radius = 0.0;
  std::vector<std::size_t> support;
};

/// Gram-Schmidt in input order. Throws RankDeficient when the inputs are
/// numerically dependent.
Frame orthonormalize(std::span<const RealVec> vectors);

/// 1 + numerical rank of the differences to the first point.
int affine_rank(std::span<const RealVec> points);

/// Orthonormal basis (columns) of the linear space parallel to aff(points).
Eigen::MatrixXd affine_direction_basis(std::span<const RealVec> points);

/// Applies (I - sum_k s_k s_k^T) to every point.
std::vector<RealVec> project_onto_complement(std::span<const RealVec> points, const Frame& axis);

/// Smallest enclosing ball via move-to-front Welzl recursion. Points are
/// processed in lexicographic order, so the result does not depend on the
/// order of the input.
Ball min_enclosing_ball(std::span<const RealVec> points);

/// Center and radius of the smallest sphere through `points` inside their
/// affine hull; least-squares center when they are affinely dependent.
Ball circumball(std::span<const RealVec> points);

}  // namespace outer_radii
