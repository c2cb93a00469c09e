#include "outer_radii/simplex_radii.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "outer_radii/error.hpp"

namespace outer_radii {

const char* to_string(RadiiFormula f) {
  switch (f) {
    case RadiiFormula::SqrtJOverN1: return "SqrtJOverN1";
    case RadiiFormula::OddTheorem2: return "OddTheorem2";
    case RadiiFormula::EvenTheorem2: return "EvenTheorem2";
    case RadiiFormula::NoClosedForm: return "NoClosedForm";
  }
  return "NoClosedForm";
}

Polytope standard_embedding(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "simplex dimension must be >= 1");
  std::vector<RealVec> v;
  v.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) v.push_back(RealVec::Unit(n + 1, i));
  return Polytope::from_vertices(std::move(v), "T^" + std::to_string(n));
}

Polytope regular_simplex(int n, double edge) {
  if (!(edge > 0.0) || !std::isfinite(edge)) throw Error(ErrorKind::InvalidInput, "edge must be positive");
  Polytope p = standard_embedding(n);
  const double scale = edge / std::sqrt(2.0);
  for (auto& v : p.vertices) v *= scale;
  return p;
}

RadiiAnswer closed_form(const RadiiQuery& q) {
  if (q.n < 1) throw Error(ErrorKind::InvalidInput, "n must be >= 1");
  if (q.j < 1 || q.j > q.n) throw Error(ErrorKind::InvalidJ, "j must lie in [1, n]");
  if (!(q.edge > 0.0) || !std::isfinite(q.edge)) throw Error(ErrorKind::InvalidInput, "edge must be positive");

  const double n = q.n;
  const double j = q.j;
  RadiiAnswer a;
  // Values for edge 1.
  double unit = std::numeric_limits<double>::quiet_NaN();
  if (q.n % 2 == 0 && q.j == q.n - 1) {
    a.formula = RadiiFormula::EvenTheorem2;
    unit = (2.0 * n - 1.0) / (2.0 * std::sqrt(2.0 * n * (n + 1.0)));
    a.exact_expr = "(2n-1)/(2sqrt(2n(n+1)))";
  } else if (q.n % 2 == 1 && q.j == q.n - 1) {
    a.formula = RadiiFormula::OddTheorem2;
    unit = std::sqrt((n - 1.0) / (2.0 * (n + 1.0)));
    a.exact_expr = "sqrt((n-1)/(2(n+1)))";
  } else if (q.n % 2 == 0 && q.j == 1) {
    a.formula = RadiiFormula::NoClosedForm;
  } else {
    a.formula = RadiiFormula::SqrtJOverN1;
    unit = std::sqrt(j / (2.0 * (n + 1.0)));
    a.exact_expr = "sqrt(j/(2(n+1)))";
  }
  a.value = unit * q.edge;
  if (a.formula != RadiiFormula::NoClosedForm && q.edge != 1.0) {
    std::ostringstream os;
    os.precision(15);
    os << q.edge << "*" << a.exact_expr;
    a.exact_expr = os.str();
  }
  return a;
}

double pn_star(int n, int j) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorKind::InvalidJ, "closed-form offset needs even n");
  if (j < 2 || j > n - 1) throw Error(ErrorKind::InvalidJ, "closed-form offset needs 2 <= j <= n-1");
  const double nn = n;
  return (nn - j + 2.0) / (2.0 * std::sqrt(nn * (nn + 1.0)));
}

double pn_star_general(double height, double facet_radius) {
  if (!(height > 0.0)) throw Error(ErrorKind::InvalidInput, "apex height must be positive");
  return (height * height - facet_radius * facet_radius) / (2.0 * height);
}

double rho_from_objective(int n, int j, double objective) {
  if (n < 1 || j < 1 || j > n) throw Error(ErrorKind::InvalidJ, "j must lie in [1, n]");
  if (!(objective >= 0.0)) throw Error(ErrorKind::InvalidInput, "objective must be nonnegative");
  const double nn = n;
  const double c = n - j;
  const double rho2 = (2.0 + c) * (2.0 - c) / (4.0 * (nn + 1.0)) + objective / 4.0 + (j - 1.0) / (nn + 1.0);
  if (rho2 < 0.0) throw Error(ErrorKind::NegativeRadicand, "squared radius is negative");
  return std::sqrt(rho2);
}

double upper_bound_facet_parallel(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be >= 2");
  const double nn = n;
  return (2.0 * nn - 1.0) / (2.0 * std::sqrt(nn * (nn + 1.0)));
}

}  // namespace outer_radii
