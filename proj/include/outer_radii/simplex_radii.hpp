#pragma once

#include <string>

#include "outer_radii/geometry.hpp"

namespace outer_radii {

struct RadiiQuery {
  int n = 1;
  int j = 1;
  double edge = 1.0;
};

enum class RadiiFormula { SqrtJOverN1, OddTheorem2, EvenTheorem2, NoClosedForm };

const char* to_string(RadiiFormula f);

struct RadiiAnswer {
  double value = 0.0;  // NaN for NoClosedForm
  RadiiFormula formula = RadiiFormula::NoClosedForm;
  std::string exact_expr;  // closed form for edge 1, prefixed by the edge factor otherwise
};

/// conv{e_1, ..., e_{n+1}} in (n+1)-space: a regular n-simplex of edge sqrt(2)
/// lying in the hyperplane of coordinate sum 1.
Polytope standard_embedding(int n);

/// The standard embedding rescaled to the given edge length.
Polytope regular_simplex(int n, double edge);

/// Outer j-radius of the regular n-simplex where a closed form is known.
/// The only gap is j = 1 for even n >= 4 (the width), reported as NoClosedForm.
RadiiAnswer closed_form(const RadiiQuery& q);

/// Offset of the optimal facet-parallel axis from the facet hyperplane for
/// the edge-sqrt(2) simplex with n even, 2 <= j <= n-1.
double pn_star(int n, int j);

/// General offset ((h)^2 - r^2) / (2h), where h is the height of the apex
/// above the facet and r the (j-1)-radius of the facet.
double pn_star_general(double height, double facet_radius);

/// Radius of the circumscribing j-cylinder of the edge-sqrt(2) simplex whose
/// quartic objective sum_i (sum_k s_ik^2)^2 equals `objective`.
double rho_from_objective(int n, int j, double objective);

/// Best facet-parallel (n-1)-cylinder radius, edge sqrt(2). Tight for even n.
double upper_bound_facet_parallel(int n);

}  // namespace outer_radii
