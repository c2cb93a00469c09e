#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "outer_radii/certify.hpp"
#include "outer_radii/cylinder.hpp"
#include "outer_radii/error.hpp"
#include "outer_radii/search.hpp"
#include "outer_radii/simplex_radii.hpp"
#include "outer_radii/sym_poly.hpp"

using json = nlohmann::ordered_json;
using namespace outer_radii;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitFailure = 3;

// Rounds to 15 significant digits so JSON output does not carry noise digits.
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::stod(buf);
}

json vec(const RealVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

std::string fixed6(double x) {
  if (!std::isfinite(x)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sci(double x) {
  if (!std::isfinite(x)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", x);
  return buf;
}

struct Common {
  std::string format = "json";
  bool timing = false;
  std::uint64_t seed = 0;
  int starts = 0;
  int threads = 0;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void emit(json report, const Common& c, const Stopwatch& sw) {
  if (c.timing) report["wall_time"] = num(sw.seconds());
  std::cout << report.dump(2) << "\n";
}

SearchConfig search_config(const Common& c) {
  SearchConfig cfg;
  cfg.starts = c.starts;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return cfg;
}

Polytope read_polytope(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array()) {
    throw Error(ErrorKind::InvalidInput, "expected an object with a \"vertices\" array");
  }
  std::vector<RealVec> vertices;
  for (const auto& row : doc["vertices"]) {
    if (!row.is_array() || row.empty()) throw Error(ErrorKind::InvalidInput, "each vertex must be a nonempty list");
    RealVec v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i].is_number()) throw Error(ErrorKind::InvalidInput, "vertex coordinates must be numbers");
      v[static_cast<Eigen::Index>(i)] = row[i].get<double>();
    }
    vertices.push_back(std::move(v));
  }
  std::optional<std::string> label;
  if (doc.contains("label") && doc["label"].is_string()) label = doc["label"].get<std::string>();
  return Polytope::from_vertices(std::move(vertices), label);
}

json touch_json(const TouchReport& t) {
  json o;
  o["touching"] = t.touching;
  o["nu"] = t.nu;
  o["dimension"] = t.dimension;
  o["case"] = to_string(t.touch_case);
  o["hyperplane"] = t.hyperplane;
  o["max_gap"] = num(t.max_gap);
  return o;
}

// ---------------------------------------------------------------- radius

struct RadiusArgs {
  std::optional<int> regular;
  std::string file;
  double edge = 1.0;
  int j = 0;
  std::optional<double> tol;
};

int cmd_radius(const RadiusArgs& a, const Common& c) {
  Stopwatch sw;
  if (a.regular.has_value() == !a.file.empty()) {
    throw Error(ErrorKind::InvalidInput, "give exactly one of --regular or --file");
  }
  const Polytope poly = a.regular ? regular_simplex(*a.regular, a.edge) : read_polytope(a.file);
  const int n = affine_rank(poly.vertices) - 1;
  if (n < 1) throw Error(ErrorKind::InvalidInput, "polytope is a single point");
  if (a.j < 1 || a.j > n) throw Error(ErrorKind::InvalidJ, "j must lie in [1, " + std::to_string(n) + "]");

  std::optional<RadiiAnswer> closed;
  if (a.regular) closed = closed_form({*a.regular, a.j, a.edge});

  const SearchResult res = minimize_rj(poly, a.j, search_config(c));
  const Cylinder& cyl = res.best;
  const double tol = a.tol.value_or(default_touch_tol(cyl.radius));
  const TouchReport touch = touching_set(poly, cyl, tol);  // throws NotEnclosing

  const bool has_closed = closed && closed->formula != RadiiFormula::NoClosedForm;
  const double radius = has_closed ? closed->value : cyl.radius;
  const double gap = has_closed ? std::abs(closed->value - cyl.radius) : NAN;

  if (c.format == "text") {
    std::cout << "polytope    " << poly.label.value_or("(unlabeled)") << "\n"
              << "n, j        " << n << ", " << a.j << "\n"
              << "radius      " << fixed6(radius) << "\n";
    if (has_closed) std::cout << "exact_expr  " << closed->exact_expr << "\n";
    std::cout << "numeric     " << fixed6(cyl.radius) << "\n";
    if (has_closed) std::cout << "gap         " << sci(gap) << "\n";
    std::cout << "touching    nu=" << touch.nu << " case=" << to_string(touch.touch_case) << " vertices=";
    for (std::size_t i = 0; i < touch.touching.size(); ++i) std::cout << (i ? "," : "") << touch.touching[i];
    std::cout << "\nstarts      " << res.converged_starts << "/" << res.starts << " converged\n";
    if (c.timing) std::cout << "wall_time   " << fixed6(sw.seconds()) << " s\n";
  } else {
    json r;
    r["command"] = "radius";
    json in;
    if (a.regular) {
      in["regular"] = *a.regular;
      in["edge"] = num(a.edge);
    } else {
      in["file"] = a.file;
    }
    if (poly.label) in["label"] = *poly.label;
    in["j"] = a.j;
    in["starts"] = res.starts;
    in["seed"] = c.seed;
    r["inputs"] = in;
    json out;
    out["n"] = n;
    out["radius"] = num(radius);
    out["exact_expr"] = has_closed ? json(closed->exact_expr) : json(nullptr);
    out["formula"] = closed ? json(to_string(closed->formula)) : json(nullptr);
    out["numeric"] = num(cyl.radius);
    out["gap"] = num(gap);
    out["base_point"] = vec(cyl.base_point);
    json frame = json::array();
    for (int k = 0; k < cyl.axis.count(); ++k) frame.push_back(vec(cyl.axis.vector(k)));
    out["frame"] = frame;
    r["results"] = out;
    json diag;
    diag["touch"] = touch_json(touch);
    diag["touch_tol"] = num(tol);
    diag["enclosure_verified"] = true;
    diag["converged_starts"] = res.converged_starts;
    diag["best_start"] = res.best_start;
    r["diagnostics"] = diag;
    emit(r, c, sw);
  }
  return res.converged_starts > 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  int n_min = 2;
  int n_max = 6;
  double edge = 1.0;
  bool all_j = false;
};

int cmd_table(const TableArgs& a, const Common& c) {
  Stopwatch sw;
  if (a.n_min < 2 || a.n_max < a.n_min) throw Error(ErrorKind::InvalidInput, "need 2 <= n-min <= n-max");
  struct Row {
    int n, j;
    RadiiAnswer closed;
    double numeric, gap;
    bool converged;
  };
  std::vector<Row> rows;
  for (int n = a.n_min; n <= a.n_max; ++n) {
    const Polytope poly = regular_simplex(n, a.edge);
    const int j_lo = a.all_j ? 1 : n - 1;
    for (int j = j_lo; j <= (a.all_j ? n : n - 1); ++j) {
      const RadiiAnswer closed = closed_form({n, j, a.edge});
      const SearchResult res = minimize_rj(poly, j, search_config(c));
      touching_set(poly, res.best, default_touch_tol(res.best.radius));  // enclosure re-check
      const double gap = closed.formula == RadiiFormula::NoClosedForm ? NAN : std::abs(closed.value - res.best.radius);
      rows.push_back({n, j, closed, res.best.radius, gap, res.converged_starts > 0});
    }
  }
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.converged; });

  if (c.format == "csv") {
    std::cout << "n,j,closed_form,numeric,gap,exact_expr\n";
    char buf[256];
    for (const auto& r : rows) {
      auto field = [&](double x) -> std::string {
        if (!std::isfinite(x)) return "";
        std::snprintf(buf, sizeof buf, "%.15g", x);
        return buf;
      };
      std::cout << r.n << "," << r.j << "," << field(r.closed.value) << "," << field(r.numeric) << ","
                << field(r.gap) << ",\"" << r.closed.exact_expr << "\"\n";
    }
  } else if (c.format == "text") {
    std::printf("%4s %4s %12s %12s %10s  %s\n", "n", "j", "closed_form", "numeric", "gap", "exact_expr");
    for (const auto& r : rows) {
      std::printf("%4d %4d %12s %12s %10s  %s\n", r.n, r.j, fixed6(r.closed.value).c_str(), fixed6(r.numeric).c_str(),
                  sci(r.gap).c_str(), r.closed.exact_expr.c_str());
    }
    if (c.timing) std::printf("wall_time %s s\n", fixed6(sw.seconds()).c_str());
  } else {
    json r;
    r["command"] = "table";
    r["inputs"] = {{"n_min", a.n_min}, {"n_max", a.n_max}, {"edge", num(a.edge)}, {"all_j", a.all_j}, {"seed", c.seed}};
    json out = json::array();
    for (const auto& row : rows) {
      out.push_back({{"n", row.n},
                     {"j", row.j},
                     {"closed_form", num(row.closed.value)},
                     {"numeric", num(row.numeric)},
                     {"gap", num(row.gap)},
                     {"exact_expr", row.closed.exact_expr},
                     {"formula", to_string(row.closed.formula)}});
    }
    r["results"] = out;
    r["diagnostics"] = {{"all_converged", ok}, {"enclosure_verified", true}};
    emit(r, c, sw);
  }
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- sympoly

json solution_json(const SymSolution& s) {
  json o;
  o["k"] = s.k;
  o["s"] = {num(s.s[0]), num(s.s[1]), num(s.s[2])};
  o["objective"] = num(s.objective);
  o["residuals"] = {num(s.residuals[0]), num(s.residuals[1]), num(s.residuals[2])};
  json fv = json::array();
  for (double v : s.full_vector) fv.push_back(num(v));
  o["full_vector"] = fv;
  return o;
}

json certificate_json(const Certificate& c) {
  return {{"kind", to_string(c.kind)}, {"passed", c.passed}, {"witness", c.witness}};
}

int cmd_sympoly(int n, bool all, const Common& c) {
  Stopwatch sw;
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be >= 2");
  std::vector<SymSolution> sols;
  if (all) {
    sols = optimal_solutions(n);
  } else {
    sols.push_back(solve_full(n));
  }
  bool ok = true;
  std::vector<Certificate> certs;
  for (const auto& s : sols) {
    certs.push_back(certify_solution(n, s));
    ok = ok && certs.back().passed;
  }
  const double expected = n % 2 == 0 ? 1.0 / n : 1.0 / (n + 1);
  if (c.format == "text") {
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const auto& s = sols[i];
      std::printf("n=%d k=(%d,%d,%d) s=(%s,%s,%s) objective=%s expected=%s certificate=%s\n", n, s.k[0], s.k[1],
                  s.k[2], fixed6(s.s[0]).c_str(), fixed6(s.s[1]).c_str(), fixed6(s.s[2]).c_str(),
                  fixed6(s.objective).c_str(), fixed6(expected).c_str(), certs[i].passed ? "pass" : "FAIL");
      std::printf("  %s\n", certs[i].witness.c_str());
    }
    if (c.timing) std::printf("wall_time %s s\n", fixed6(sw.seconds()).c_str());
  } else {
    json r;
    r["command"] = "sympoly";
    r["inputs"] = {{"n", n}, {"all", all}};
    json out = json::array();
    for (std::size_t i = 0; i < sols.size(); ++i) {
      json e = solution_json(sols[i]);
      e["certificate"] = certificate_json(certs[i]);
      out.push_back(e);
    }
    r["results"] = {{"expected_objective", num(expected)},
                    {"exact_expr", n % 2 == 0 ? "1/n" : "1/(n+1)"},
                    {"solutions", out}};
    emit(r, c, sw);
  }
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  int n_max = 20;
  int samples = 100;
  bool corrupt = false;
  int trials = 100;
  int n = 3;
  int j = 2;
  double band = 1e-6;
};

struct VerifyLine {
  std::string name;
  bool passed;
  std::string witness;
};

std::vector<VerifyLine> suite_identities(const VerifyArgs& a, std::uint64_t seed) {
  std::vector<VerifyLine> out;
  auto add = [&](const std::string& name, const Certificate& c) { out.push_back({name, c.passed, c.witness}); };
  for (int n = 1; n <= a.n_max; ++n) {
    auto coeffs = OddIdentityCoefficients::standard(n);
    if (a.corrupt) coeffs.quartic += 1;
    add("IdentityOdd", verify_identity_odd(n, a.samples, seed + n, coeffs));
    if (n < 2) continue;
    add("K1Factorization", verify_k1_factorization(n, a.samples, seed + n, a.corrupt));
    add("ObjectiveIdentity", verify_objective_identity(n, a.samples, seed + n, a.corrupt));
  }
  add("VandermondeDet", verify_vandermonde(a.samples, seed, a.corrupt));
  return out;
}

std::vector<VerifyLine> suite_sympoly(const VerifyArgs& a) {
  std::vector<VerifyLine> out;
  for (int n = 2; n <= a.n_max; ++n) {
    SymSolution s = solve_full(n);
    if (a.corrupt) s.full_vector.front() += 1e-6;
    const Certificate c = certify_solution(n, s);
    out.push_back({"SolutionResiduals n=" + std::to_string(n), c.passed, c.witness});
  }
  return out;
}

// Random full-dimensional simplices; the touching set of the minimal
// j-cylinder must have affine rank at least n - j + 2.
std::vector<VerifyLine> suite_theorem1(const VerifyArgs& a, const Common& c) {
  if (a.n < 2 || a.j < 1 || a.j >= a.n) throw Error(ErrorKind::InvalidJ, "need n >= 2 and 1 <= j <= n-1");
  std::vector<VerifyLine> out;
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < a.trials; ++t) {
    std::vector<RealVec> v;
    do {
      v.assign(static_cast<std::size_t>(a.n) + 1, RealVec(a.n));
      for (auto& p : v) {
        for (int i = 0; i < a.n; ++i) p[i] = gauss(rng);
      }
    } while (affine_rank(v) != a.n + 1);
    const Polytope poly = Polytope::from_vertices(std::move(v));
    SearchConfig cfg = search_config(c);
    cfg.seed = c.seed * 1000003ULL + static_cast<std::uint64_t>(t);
    const SearchResult res = minimize_rj(poly, a.j, cfg);
    const TouchReport touch = touching_set(poly, res.best, a.band);
    const bool ok = touch.nu >= a.n - a.j + 2;
    std::ostringstream w;
    w << "radius " << fixed6(res.best.radius) << ", nu " << touch.nu << " (need >= " << a.n - a.j + 2 << "), case "
      << to_string(touch.touch_case);
    out.push_back({"TouchingRank trial " + std::to_string(t), ok, w.str()});
  }
  return out;
}

int cmd_verify(const VerifyArgs& a, const Common& c) {
  Stopwatch sw;
  std::vector<VerifyLine> lines;
  if (a.suite == "identities") {
    lines = suite_identities(a, c.seed);
  } else if (a.suite == "sympoly") {
    lines = suite_sympoly(a);
  } else if (a.suite == "theorem1") {
    lines = suite_theorem1(a, c);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown suite " + a.suite);
  }
  const bool ok = std::all_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return l.passed; });
  if (c.format == "json") {
    json r;
    r["command"] = "verify";
    r["inputs"] = {{"suite", a.suite}, {"seed", c.seed}, {"corrupt", a.corrupt}};
    json out = json::array();
    for (const auto& l : lines) out.push_back({{"name", l.name}, {"passed", l.passed}, {"witness", l.witness}});
    r["results"] = out;
    r["diagnostics"] = {{"all_passed", ok}};
    emit(r, c, sw);
  } else {
    for (const auto& l : lines) std::cout << (l.passed ? "PASS " : "FAIL ") << l.name << ": " << l.witness << "\n";
    std::cout << (ok ? "all passed" : "FAILED") << "\n";
    if (c.timing) std::cout << "wall_time " << fixed6(sw.seconds()) << " s\n";
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotEnclosing:
    case ErrorKind::MalformedSolution:
      return kExitFailure;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer radii of convex polytopes and regular simplices"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, const std::string& default_format, std::vector<std::string> formats) {
    common.format = default_format;
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_option("--starts", common.starts, "Search starts per query (0 = default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--timing", common.timing, "Report wall time");
  };

  RadiusArgs radius;
  auto* r = app.add_subcommand("radius", "Outer j-radius of a polytope");
  r->add_option("--regular", radius.regular, "Regular simplex of this dimension");
  r->add_option("--file", radius.file, "Polytope JSON file")->check(CLI::ExistingFile);
  r->add_option("--edge", radius.edge, "Edge length for --regular")->check(CLI::PositiveNumber);
  r->add_option("--j", radius.j, "Dimension of the projection")->required();
  r->add_option("--tol", radius.tol, "Touch band for the touching set");

  TableArgs table;
  auto* t = app.add_subcommand("table", "Closed forms against the numeric search for regular simplices");
  t->add_option("--n-min", table.n_min, "Smallest n");
  t->add_option("--n-max", table.n_max, "Largest n");
  t->add_option("--edge", table.edge, "Edge length")->check(CLI::PositiveNumber);
  t->add_flag("--all-j", table.all_j, "All j instead of j = n-1");

  int sym_n = 0;
  bool sym_all = false;
  auto* s = app.add_subcommand("sympoly", "Solve and certify the symmetric quartic program");
  s->add_option("n", sym_n, "Dimension n")->required();
  s->add_flag("--all", sym_all, "Report every optimal solution");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run a certification suite");
  v->add_option("suite", verify.suite, "identities | sympoly | theorem1")
      ->required()
      ->check(CLI::IsMember({"identities", "sympoly", "theorem1"}));
  v->add_option("--n-max", verify.n_max, "Largest n for identities and sympoly");
  v->add_option("--samples", verify.samples, "Random samples per identity");
  v->add_flag("--corrupt", verify.corrupt, "Corrupt the checked identities or solutions");
  v->add_option("--trials", verify.trials, "Random simplices for theorem1");
  v->add_option("--n", verify.n, "Dimension for theorem1");
  v->add_option("--j", verify.j, "j for theorem1");
  v->add_option("--tol", verify.band, "Touch band for theorem1");

  // Options land in one shared struct; only the selected subcommand's
  // defaults matter, so fix the format default after parsing.
  for (auto* sub : {r, t, s, v}) add_common(sub, "json", {"json", "csv", "text"});
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }
  auto* chosen = app.get_subcommands().front();
  if (chosen->count("--format") == 0) {
    common.format = (chosen == t) ? "csv" : (chosen == v) ? "text" : "json";
  }

  try {
    if (chosen == r) return cmd_radius(radius, common);
    if (chosen == t) return cmd_table(table, common);
    if (chosen == s) return cmd_sympoly(sym_n, sym_all, common);
    return cmd_verify(verify, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
