#pragma once

#include <cstdint>
#include <vector>

#include "outer_radii/cylinder.hpp"
#include "outer_radii/geometry.hpp"

namespace outer_radii {

struct SearchConfig {
  int starts = 0;  // 0 selects 16 * (n - j + 1)
  int max_iters = 20000;
  double step_tol = 1e-10;
  double f_tol = 1e-15;
  double initial_step = 0.5;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 selects std::thread::hardware_concurrency()
};

struct SearchResult {
  Cylinder best;
  std::vector<double> objective_history;  // accepted objectives of the winning start
  int converged_starts = 0;
  int starts = 0;
  int best_start = 0;
  std::vector<double> start_radii;
};

int default_starts(int n, int j);

/// Orthonormalized columns of a seeded Gaussian dim x count matrix.
Frame random_frame(int dim, int count, std::uint64_t seed);

/// Pattern search over the Grassmannian starting from `frame`. Directions
/// stay inside the linear space parallel to aff(polytope) when the frame
/// already lies there.
Frame local_refine(const Polytope& polytope, const Frame& frame, const SearchConfig& cfg);

/// Multistart minimization of the enclosing j-cylinder radius. The frames
/// range over the directions of aff(polytope), so j is relative to the
/// affine dimension of the polytope.
SearchResult minimize_rj(const Polytope& polytope, int j, const SearchConfig& cfg);

}  // namespace outer_radii
