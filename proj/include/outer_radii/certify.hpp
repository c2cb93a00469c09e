#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "outer_radii/sym_poly.hpp"

namespace outer_radii {

using Rational = mpq_class;

enum class CertificateKind { IdentityOdd, K1Factorization, ObjectiveIdentity, SolutionResiduals, VandermondeDet };

const char* to_string(CertificateKind k);

struct Certificate {
  CertificateKind kind = CertificateKind::IdentityOdd;
  bool passed = false;
  std::string witness;
};

/// Coefficients of
///   quartic * sum s^4 - constant
///     = linear * (sum s^2 - 1) + square * sum (s^2 - shift)^2.
/// The true identity has quartic = square = 1 and constant = shift = 1/(n+1),
/// linear = 2/(n+1). Tests mutate them to check the verifier rejects.
struct OddIdentityCoefficients {
  Rational quartic, constant, linear, square, shift;
  static OddIdentityCoefficients standard(int n);
};

/// Left and right hand side of the quartic identity at a point of Q^{n+1}.
std::pair<Rational, Rational> identity_odd_sides(std::span<const Rational> s, const OddIdentityCoefficients& c);

/// Checks the identity by exact expansion in n+1 variables.
bool identity_odd_expands_to_zero(int n, const OddIdentityCoefficients& c);

Certificate verify_identity_odd(int n, int samples, std::uint64_t seed);
Certificate verify_identity_odd(int n, int samples, std::uint64_t seed, const OddIdentityCoefficients& c);

// Exact forms of the multiplicity formulas and the two closed-form
// rewrites used to bound the program for even n.
std::array<Rational, 3> ks_from_s_exact(const Rational& s1, const Rational& s2, const Rational& s3);
Rational s2_from_exact(const Rational& s1, const Rational& s3, int n);
Rational k1_offset_factored(int n, const Rational& s1, const Rational& s3);
Rational objective_closed_form(int n, const Rational& s1, const Rational& s3);

/// Single-point checks of the two identities below at (s1, s3), with s2 and
/// the multiplicities substituted. Empty when the point lies on the zero set
/// of some denominator.
std::optional<bool> k1_identity_holds(int n, const Rational& s1, const Rational& s3, bool corrupt = false);
std::optional<bool> objective_identity_holds(int n, const Rational& s1, const Rational& s3, bool corrupt = false);

/// k1 - (n+1)/2 from the multiplicity formulas against its factorization,
/// at random rational (s1, s3). `corrupt` perturbs the factorization.
Certificate verify_k1_factorization(int n, int samples, std::uint64_t seed, bool corrupt = false);

/// k1 s1^4 + k2 s2^4 + k3 s3^4 against its closed form in (s1, s3).
Certificate verify_objective_identity(int n, int samples, std::uint64_t seed, bool corrupt = false);

/// Exact determinant over Q by fraction-free elimination with pivoting.
Rational determinant(std::vector<std::vector<Rational>> m);

/// The 4x4 Lagrange determinant equals -24 times the Vandermonde product and
/// the 3x3 moment determinant equals s1 s2 s3 (s1-s2)(s1-s3)(s2-s3).
Certificate verify_vandermonde(int samples, std::uint64_t seed, bool corrupt = false);

/// Re-checks a solver output at 50 significant digits: the moment
/// constraints on the expanded vector, a high-precision re-polish of the
/// roots, the optimal value for the parity of n and, for interior
/// solutions, the bounds k1 <= n/2 and s1 <= -1/sqrt(n).
Certificate certify_solution(int n, const SymSolution& sol);

}  // namespace outer_radii
