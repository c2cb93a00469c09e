#pragma once

#include <cstddef>
#include <vector>

#include "outer_radii/geometry.hpp"

namespace outer_radii {

struct SearchConfig;

/// The set axis + radius * B, where the axis is the flat base_point + span(frame).
struct Cylinder {
  RealVec base_point;
  Frame axis;
  double radius = 0.0;
};

enum class TouchCase { CaseA, CaseB, Indeterminate };

const char* to_string(TouchCase c);

struct TouchReport {
  std::vector<std::size_t> touching;
  int nu = 0;              // affine rank of the touching vertices
  int dimension = 0;       // affine dimension n of the polytope
  TouchCase touch_case = TouchCase::Indeterminate;
  std::vector<std::size_t> hyperplane;  // vertices in aff(touching) when CaseB
  double max_gap = 0.0;    // largest |dist - radius| among touching vertices
};

/// Default touch band for numerically found cylinders.
inline double default_touch_tol(double radius) { return 1e-7 * (1.0 + radius); }

/// Smallest cylinder with the given axis directions: the base point is the
/// center of the minimal ball around the projected vertices.
Cylinder cylinder_radius(const Polytope& polytope, const Frame& axis);

/// Distance from each vertex to the cylinder axis.
std::vector<double> axis_distances(const Polytope& polytope, const Cylinder& cyl);

TouchReport touching_set(const Polytope& polytope, const Cylinder& cyl, double tol);

/// For every vertex off the boundary, whether the axis is parallel to the
/// opposite facet. Touching vertices report true.
std::vector<bool> facet_parallelism_check(const Polytope& simplex, const Cylinder& cyl, double tol);

/// R_{j-1} of the section of the polytope by the hyperplane spanned by the
/// given vertices, measured inside that hyperplane.
double case_b_recursion(const Polytope& polytope, const std::vector<std::size_t>& hyperplane_vertices, int j,
                        const SearchConfig& cfg);

}  // namespace outer_radii
