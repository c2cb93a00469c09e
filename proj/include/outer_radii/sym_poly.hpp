#pragma once

#include <array>
#include <vector>

namespace outer_radii {

// Program over v in R^{n+1}:
//   min sum v_i^4  s.t.  sum v_i^3 = 0,  sum v_i^2 = 1,  sum v_i = 0.
// Optimal points take at most three distinct values s_1, s_2, s_3 with
// multiplicities k_1, k_2, k_3, which turns it into a small system with
// integer side conditions.

using Multiplicity = std::array<int, 3>;

struct SymSolution {
  Multiplicity k{};
  std::array<double, 3> s{};
  double objective = 0.0;
  std::array<double, 3> residuals{};  // sum v^3, sum v^2 - 1, sum v on full_vector
  std::vector<double> full_vector;    // sorted descending
};

inline constexpr double kResidualTol = 1e-11;

/// All (k1, k2, k3) with k1, k2 >= 1, k3 >= 0 and k1 + k2 + k3 = n + 1.
std::vector<Multiplicity> enumerate_triples(int n);

/// Real multiplicities that make (s1, s2, s3) satisfy the three moment
/// equations. Throws DegenerateValues when the values are not pairwise
/// distinct and nonzero.
std::array<double, 3> ks_from_s(double s1, double s2, double s3);

/// The s2 for which the multiplicities from ks_from_s sum to n + 1.
double s2_from(double s1, double s3, int n);

/// Expands (k, s) and evaluates objective and residuals.
SymSolution make_solution(int n, const Multiplicity& k, const std::array<double, 3>& s);

/// Every real solution of the moment equations for fixed multiplicities,
/// sign-normalized so the first nonzero value is negative. Only solutions
/// whose residuals pass kResidualTol are returned.
std::vector<SymSolution> solve_triple(int n, const Multiplicity& k);

/// Minimum over all multiplicity triples; ties go to the first triple in
/// enumeration order.
SymSolution solve_full(int n);

/// All solutions within `tol` of the optimum, deduplicated by full_vector.
std::vector<SymSolution> optimal_solutions(int n, double tol = 1e-10);

}  // namespace outer_radii
