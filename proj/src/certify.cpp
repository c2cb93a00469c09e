#include "outer_radii/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "outer_radii/error.hpp"

namespace outer_radii {

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::IdentityOdd: return "IdentityOdd";
    case CertificateKind::K1Factorization: return "K1Factorization";
    case CertificateKind::ObjectiveIdentity: return "ObjectiveIdentity";
    case CertificateKind::SolutionResiduals: return "SolutionResiduals";
    case CertificateKind::VandermondeDet: return "VandermondeDet";
  }
  return "Unknown";
}

namespace {

class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed), num_(-1000, 1000), den_(1, 1000) {}

  Rational operator()() {
    Rational q(num_(rng_), den_(rng_));
    q.canonicalize();
    return q;
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_int_distribution<long> num_;
  std::uniform_int_distribution<long> den_;
};

// Sparse polynomial over Q; monomials are exponent vectors.
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  explicit Polynomial(int vars) : vars_(vars) {}

  static Polynomial constant(int vars, const Rational& c) {
    Polynomial p(vars);
    p.add_term(Monomial(vars, 0), c);
    return p;
  }

  static Polynomial variable_power(int vars, int i, int power, const Rational& c = 1) {
    Polynomial p(vars);
    Monomial m(vars, 0);
    m[i] = power;
    p.add_term(m, c);
    return p;
  }

  void add_term(const Monomial& m, const Rational& c) {
    auto& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  Polynomial operator*(const Polynomial& o) const {
    Polynomial out(vars_);
    for (const auto& [ma, ca] : terms_) {
      for (const auto& [mb, cb] : o.terms_) {
        Monomial m(vars_);
        for (int i = 0; i < vars_; ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, ca * cb);
      }
    }
    return out;
  }

  Polynomial scaled(const Rational& c) const {
    Polynomial out(vars_);
    for (const auto& [m, v] : terms_) out.add_term(m, v * c);
    return out;
  }

  std::size_t size() const { return terms_.size(); }

 private:
  int vars_;
  std::map<Monomial, Rational> terms_;
};

}  // namespace

OddIdentityCoefficients OddIdentityCoefficients::standard(int n) {
  const Rational inv(1, n + 1);
  return {Rational(1), inv, Rational(2 * inv), Rational(1), inv};
}

std::pair<Rational, Rational> identity_odd_sides(std::span<const Rational> s, const OddIdentityCoefficients& coeffs) {
  // mpq equality compares representations, so work with reduced fractions.
  OddIdentityCoefficients c = coeffs;
  for (Rational* q : {&c.quartic, &c.constant, &c.linear, &c.square, &c.shift}) q->canonicalize();
  Rational p2 = 0, p4 = 0, sq = 0;
  for (const auto& x : s) {
    const Rational x2 = x * x;
    p2 += x2;
    p4 += x2 * x2;
    const Rational d = x2 - c.shift;
    sq += d * d;
  }
  return {c.quartic * p4 - c.constant, c.linear * (p2 - 1) + c.square * sq};
}

bool identity_odd_expands_to_zero(int n, const OddIdentityCoefficients& coeffs) {
  OddIdentityCoefficients c = coeffs;
  for (Rational* q : {&c.quartic, &c.constant, &c.linear, &c.square, &c.shift}) q->canonicalize();
  const int vars = n + 1;
  Polynomial diff(vars);
  // LHS
  for (int i = 0; i < vars; ++i) diff += Polynomial::variable_power(vars, i, 4, c.quartic);
  diff += Polynomial::constant(vars, -c.constant);
  // minus RHS
  for (int i = 0; i < vars; ++i) diff += Polynomial::variable_power(vars, i, 2, -c.linear);
  diff += Polynomial::constant(vars, c.linear);
  for (int i = 0; i < vars; ++i) {
    Polynomial d = Polynomial::variable_power(vars, i, 2);
    d += Polynomial::constant(vars, -c.shift);
    diff += (d * d).scaled(-c.square);
  }
  return diff.size() == 0;
}

Certificate verify_identity_odd(int n, int samples, std::uint64_t seed) {
  return verify_identity_odd(n, samples, seed, OddIdentityCoefficients::standard(n));
}

Certificate verify_identity_odd(int n, int samples, std::uint64_t seed, const OddIdentityCoefficients& c) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be >= 1");
  Certificate cert{CertificateKind::IdentityOdd, true, {}};
  RationalSampler sample(seed);
  std::vector<Rational> s(static_cast<std::size_t>(n) + 1);
  int mismatches = 0;
  for (int t = 0; t < samples; ++t) {
    for (auto& x : s) x = sample();
    const auto [lhs, rhs] = identity_odd_sides(s, c);
    if (lhs != rhs) ++mismatches;
  }
  std::ostringstream w;
  w << "n=" << n << ": " << (samples - mismatches) << "/" << samples << " rational samples exact";
  if (mismatches > 0) cert.passed = false;
  if (n <= 12) {
    const bool zero = identity_odd_expands_to_zero(n, c);
    w << "; symbolic expansion " << (zero ? "identically zero" : "nonzero");
    if (!zero) cert.passed = false;
  }
  cert.witness = w.str();
  return cert;
}

std::array<Rational, 3> ks_from_s_exact(const Rational& s1, const Rational& s2, const Rational& s3) {
  return {Rational((s2 + s3) / (-s1 * (s2 - s1) * (s3 - s1))), Rational((s1 + s3) / (s2 * (s2 - s1) * (s3 - s2))),
          Rational(-(s1 + s2) / (s3 * (s3 - s1) * (s3 - s2)))};
}

Rational s2_from_exact(const Rational& s1, const Rational& s3, int n) {
  return -(s1 + s3) / ((n + 1) * s1 * s3 + 1);
}

Rational k1_offset_factored(int n, const Rational& s1, const Rational& s3) {
  const Rational big(n + 1);
  const Rational a = big * s1 * s1 - 1;
  const Rational b = big * s3 * s3 - 1;
  const Rational d = big * s1 * s3 + 1;
  return -(a * (b - d)) / (2 * (s3 - s1) * (d * s1 + (s1 + s3)));
}

Rational objective_closed_form(int n, const Rational& s1, const Rational& s3) {
  const Rational big(n + 1);
  return 1 / big + (big * s1 * s1 - 1) * (big * s3 * s3 - 1) / (big * (-big * s1 * s3 - 1));
}

namespace {

struct AdmissiblePoint {
  Rational s1, s2, s3;
  std::array<Rational, 3> k;
};

// Derives s2 and the multiplicities from (s1, s3); empty on the zero set of
// any denominator.
std::optional<AdmissiblePoint> admissible_point(int n, const Rational& s1, const Rational& s3) {
  AdmissiblePoint p{s1, 0, s3, {}};
  const Rational big(n + 1);
  if (p.s1 == 0 || p.s3 == 0 || p.s1 == p.s3) return std::nullopt;
  if (big * p.s1 * p.s3 + 1 == 0) return std::nullopt;
  p.s2 = s2_from_exact(p.s1, p.s3, n);
  if (p.s2 == 0 || p.s2 == p.s1 || p.s2 == p.s3) return std::nullopt;
  if ((big * p.s1 * p.s3 + 1) * p.s1 + (p.s1 + p.s3) == 0) return std::nullopt;
  p.k = ks_from_s_exact(p.s1, p.s2, p.s3);
  return p;
}

// The multiplicity formulas reproduce the moment equations exactly.
bool moments_hold(int n, const AdmissiblePoint& p) {
  const auto& k = p.k;
  const Rational m1 = k[0] * p.s1 + k[1] * p.s2 + k[2] * p.s3;
  const Rational m2 = k[0] * p.s1 * p.s1 + k[1] * p.s2 * p.s2 + k[2] * p.s3 * p.s3;
  const Rational m3 = k[0] * p.s1 * p.s1 * p.s1 + k[1] * p.s2 * p.s2 * p.s2 + k[2] * p.s3 * p.s3 * p.s3;
  return m1 == 0 && m2 == 1 && m3 == 0 && k[0] + k[1] + k[2] == n + 1;
}

bool k1_identity(int n, const AdmissiblePoint& p, bool corrupt) {
  const Rational big(n + 1);
  const Rational lhs = p.k[0] - big / 2;
  Rational rhs = k1_offset_factored(n, p.s1, p.s3);
  if (corrupt) rhs *= Rational(2, 3);
  // Unfactored intermediate form of the same expression.
  const Rational alt = -((big * p.s1 * p.s1 - 1) * (big * p.s3 * (p.s3 - p.s1) - 2)) /
                       (2 * (p.s3 - p.s1) * (big * p.s1 * p.s1 * p.s3 + 2 * p.s1 + p.s3));
  return lhs == rhs && alt == rhs;
}

bool objective_identity(int n, const AdmissiblePoint& p, bool corrupt) {
  auto fourth = [](const Rational& x) { return Rational(x * x * x * x); };
  const Rational lhs = p.k[0] * fourth(p.s1) + p.k[1] * fourth(p.s2) + p.k[2] * fourth(p.s3);
  Rational rhs = objective_closed_form(n, p.s1, p.s3);
  if (corrupt) rhs += 1;
  return lhs == rhs;
}

template <class Check>
Certificate sampled_identity(CertificateKind kind, int n, int samples, std::uint64_t seed, Check check) {
  Certificate cert{kind, true, {}};
  RationalSampler sample(seed);
  int checked = 0, skipped = 0, failed = 0, moment_failures = 0;
  for (int attempt = 0; checked < samples && attempt < 4 * samples + 16; ++attempt) {
    const Rational s1 = sample();
    const Rational s3 = sample();
    const auto p = admissible_point(n, s1, s3);
    if (!p) {
      ++skipped;
      continue;
    }
    ++checked;
    if (!moments_hold(n, *p)) ++moment_failures;
    if (!check(*p)) ++failed;
  }
  cert.passed = failed == 0 && moment_failures == 0 && checked == samples;
  std::ostringstream w;
  w << "n=" << n << ": " << (checked - failed) << "/" << checked << " admissible samples exact, " << skipped
    << " singular samples skipped, moment equations " << (moment_failures == 0 ? "exact" : "violated");
  cert.witness = w.str();
  return cert;
}

}  // namespace

std::optional<bool> k1_identity_holds(int n, const Rational& s1, const Rational& s3, bool corrupt) {
  const auto p = admissible_point(n, s1, s3);
  if (!p) return std::nullopt;
  return moments_hold(n, *p) && k1_identity(n, *p, corrupt);
}

std::optional<bool> objective_identity_holds(int n, const Rational& s1, const Rational& s3, bool corrupt) {
  const auto p = admissible_point(n, s1, s3);
  if (!p) return std::nullopt;
  return moments_hold(n, *p) && objective_identity(n, *p, corrupt);
}

Certificate verify_k1_factorization(int n, int samples, std::uint64_t seed, bool corrupt) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be >= 2");
  return sampled_identity(CertificateKind::K1Factorization, n, samples, seed,
                          [&](const AdmissiblePoint& p) { return k1_identity(n, p, corrupt); });
}

Certificate verify_objective_identity(int n, int samples, std::uint64_t seed, bool corrupt) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be >= 2");
  return sampled_identity(CertificateKind::ObjectiveIdentity, n, samples, seed,
                          [&](const AdmissiblePoint& p) { return objective_identity(n, p, corrupt); });
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

Certificate verify_vandermonde(int samples, std::uint64_t seed, bool corrupt) {
  Certificate cert{CertificateKind::VandermondeDet, true, {}};
  RationalSampler sample(seed);
  int ok4 = 0, ok3 = 0, repeated = 0;
  for (int t = 0; t < samples; ++t) {
    std::array<Rational, 4> s{sample(), sample(), sample(), sample()};
    if (t % 10 == 9) {
      s[3] = s[1];
      ++repeated;
    }
    std::vector<std::vector<Rational>> lagrange;
    for (const auto& x : s) lagrange.push_back({-4 * x * x * x, 3 * x * x, 2 * x, Rational(1)});
    Rational product = 1;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) product *= s[a] - s[b];
    }
    Rational expected4 = corrupt ? -23 * product : -24 * product;
    if (determinant(lagrange) == expected4) ++ok4;

    std::vector<std::vector<Rational>> moments = {{s[0] * s[0] * s[0], s[1] * s[1] * s[1], s[2] * s[2] * s[2]},
                                                  {s[0] * s[0], s[1] * s[1], s[2] * s[2]},
                                                  {s[0], s[1], s[2]}};
    const Rational expected3 = s[0] * s[1] * s[2] * (s[0] - s[1]) * (s[0] - s[2]) * (s[1] - s[2]);
    if (determinant(moments) == expected3) ++ok3;
  }
  cert.passed = ok4 == samples && ok3 == samples;
  std::ostringstream w;
  w << "4x4: " << ok4 << "/" << samples << " exact, 3x3: " << ok3 << "/" << samples << " exact (" << repeated
    << " samples with a repeated value)";
  cert.witness = w.str();
  return cert;
}

Certificate certify_solution(int n, const SymSolution& sol) {
  using HP = boost::multiprecision::cpp_bin_float_50;
  if (n < 2) throw Error(ErrorKind::MalformedSolution, "n must be >= 2");
  if (sol.full_vector.size() != static_cast<std::size_t>(n) + 1) {
    throw Error(ErrorKind::MalformedSolution, "full_vector has the wrong length");
  }
  for (int r = 0; r < 3; ++r) {
    if (sol.k[r] < 0) throw Error(ErrorKind::MalformedSolution, "negative multiplicity");
    if (!std::isfinite(sol.s[r])) throw Error(ErrorKind::MalformedSolution, "non-finite value");
  }
  for (double v : sol.full_vector) {
    if (!std::isfinite(v)) throw Error(ErrorKind::MalformedSolution, "non-finite entry");
  }

  Certificate cert{CertificateKind::SolutionResiduals, true, {}};
  std::vector<std::string> failed;
  std::ostringstream w;
  w.precision(3);

  // (iv) and consistency of the expanded vector with (k, s).
  const int ksum = sol.k[0] + sol.k[1] + sol.k[2];
  if (ksum != n + 1) failed.push_back("(iv)");
  {
    std::vector<double> expanded;
    for (int r = 0; r < 3; ++r) expanded.insert(expanded.end(), static_cast<std::size_t>(sol.k[r]), sol.s[r]);
    std::sort(expanded.begin(), expanded.end(), std::greater<>());
    std::vector<double> given = sol.full_vector;
    std::sort(given.begin(), given.end(), std::greater<>());
    bool same = expanded.size() == given.size();
    for (std::size_t i = 0; same && i < given.size(); ++i) same = std::abs(expanded[i] - given[i]) <= 1e-9;
    if (!same) failed.push_back("full_vector does not realize (k, s)");
  }

  // Moment constraints on the given vector.
  HP p1 = 0, p2 = 0, p3 = 0;
  for (double v : sol.full_vector) {
    const HP x = v;
    p1 += x;
    p2 += x * x;
    p3 += x * x * x;
  }
  const HP r1 = abs(p3), r2 = abs(p2 - 1), r3 = abs(p1);
  w << std::scientific << "residuals (i) " << static_cast<double>(r1) << ", (ii) " << static_cast<double>(r2)
    << ", (iii) " << static_cast<double>(r3);
  if (r1 > kResidualTol) failed.push_back("(i)");
  if (r2 > kResidualTol) failed.push_back("(ii)");
  if (r3 > kResidualTol) failed.push_back("(iii)");

  // High-precision re-polish of the roots.
  std::array<HP, 3> s{HP(sol.s[0]), HP(sol.s[1]), HP(sol.s[2])};
  std::vector<int> active;
  for (int r = 0; r < 3; ++r) {
    if (sol.k[r] > 0) active.push_back(r);
  }
  bool polished = true;
  if (active.size() == 3) {
    for (int it = 0; it < 100; ++it) {
      std::array<HP, 3> f{0, -1, 0};
      HP jac[3][3];
      for (int r = 0; r < 3; ++r) {
        const HP k = sol.k[r];
        f[0] += k * s[r] * s[r] * s[r];
        f[1] += k * s[r] * s[r];
        f[2] += k * s[r];
        jac[0][r] = 3 * k * s[r] * s[r];
        jac[1][r] = 2 * k * s[r];
        jac[2][r] = k;
      }
      auto det3 = [](const HP m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      };
      const HP d = det3(jac);
      if (d == 0) {
        polished = false;
        break;
      }
      // Cramer's rule for jac * delta = -f.
      for (int col = 0; col < 3; ++col) {
        HP m[3][3];
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) m[a][b] = (b == col) ? HP(-f[a]) : jac[a][b];
        }
        s[col] += det3(m) / d;
      }
      if (abs(f[0]) + abs(f[1]) + abs(f[2]) < HP("1e-48")) break;
    }
  } else if (active.size() == 2 && sol.k[active[0]] == sol.k[active[1]]) {
    const HP a = 1 / sqrt(HP(2 * sol.k[active[0]]));
    s[active[0]] = sol.s[active[0]] < 0 ? -a : a;
    s[active[1]] = -s[active[0]];
  } else {
    polished = false;
  }

  HP q1 = 0, q2 = -1, q3 = 0, obj = 0, drift = 0;
  for (int r : active) {
    const HP k = sol.k[r];
    q1 += k * s[r];
    q2 += k * s[r] * s[r];
    q3 += k * s[r] * s[r] * s[r];
    obj += k * s[r] * s[r] * s[r] * s[r];
    drift = std::max(drift, HP(abs(s[r] - HP(sol.s[r]))));
  }
  const HP tiny("1e-30");
  const HP polished_res = abs(q1) + abs(q2) + abs(q3);
  if (!polished || polished_res > tiny || drift > HP("1e-9")) failed.push_back("high-precision re-polish");
  w << "; polished residual " << static_cast<double>(polished_res) << ", drift " << static_cast<double>(drift);
  w << "; objective " << obj.str(32);

  if (n % 2 == 0) {
    if (obj < HP(1) / n - tiny) failed.push_back("objective below 1/n");
  } else {
    if (abs(obj - HP(1) / (n + 1)) > tiny) failed.push_back("objective differs from 1/(n+1)");
  }

  const bool interior = active.size() == 3 && s[0] < 0 && 0 < s[1] && s[1] < s[2];
  if (interior) {
    if (2 * sol.k[0] > n) failed.push_back("k1 <= n/2");
    if (s[0] > -1 / sqrt(HP(n)) + tiny) failed.push_back("s1 <= -1/sqrt(n)");
    w << "; interior bounds checked";
  }

  if (!failed.empty()) {
    cert.passed = false;
    w << "; failed:";
    for (const auto& f : failed) w << " " << f;
  }
  cert.witness = w.str();
  return cert;
}

}  // namespace outer_radii
