#include "outer_radii/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "outer_radii/error.hpp"

namespace outer_radii {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  return q;
}

// Polytope vertices expressed in an orthonormal basis of the space the
// frames live in, centered at the centroid.
class LocalProblem {
 public:
  LocalProblem(const Polytope& polytope, Eigen::MatrixXd basis) : basis_(std::move(basis)) {
    centroid_ = RealVec::Zero(polytope.ambient_dim());
    for (const auto& v : polytope.vertices) centroid_ += v;
    centroid_ /= static_cast<double>(polytope.size());
    for (const auto& v : polytope.vertices) local_.push_back(basis_.transpose() * (v - centroid_));
  }

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  const std::vector<RealVec>& points() const { return local_; }

  Ball ball(const Eigen::MatrixXd& w) const {
    // Shared across worker threads, so no member scratch space.
    std::vector<RealVec> projected(local_.size());
    for (std::size_t i = 0; i < local_.size(); ++i) projected[i] = local_[i] - w * (w.transpose() * local_[i]);
    return min_enclosing_ball(projected);
  }

  double radius(const Eigen::MatrixXd& w) const { return ball(w).radius; }

 private:
  Eigen::MatrixXd basis_;
  RealVec centroid_;
  std::vector<RealVec> local_;
};

struct RefineOutcome {
  Eigen::MatrixXd frame;
  std::vector<double> history;
  bool converged = false;
};

// Opportunistic pattern search: coordinate directions of the tangent chart
// followed by random ones; the step doubles on success and halves on failure.
bool pattern_search(const LocalProblem& problem, Eigen::MatrixXd& w, double& best, double step, double step_stop,
                    int& budget, std::mt19937_64& rng, std::vector<double>& history, double f_tol) {
  const int n = problem.dim();
  const int c = static_cast<int>(w.cols());
  const double step_cap = step;
  std::normal_distribution<double> gauss;
  const int coords = c * (n - c);
  const int random_dirs = std::max(2, coords);
  for (; budget > 0; --budget) {
    if (step < step_stop) return true;
    // Orthonormal complement of the current frame inside the local space.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    const Eigen::MatrixXd full_q = qr.householderQ();
    const Eigen::MatrixXd comp = full_q.rightCols(n - c);

    bool improved = false;
    Eigen::MatrixXd dir(n - c, c);
    for (int k = 0; k < 2 * coords + random_dirs && !improved; ++k) {
      if (k < 2 * coords) {
        dir.setZero();
        dir((k / 2) % (n - c), (k / 2) / (n - c)) = (k % 2 == 0) ? 1.0 : -1.0;
      } else {
        for (Eigen::Index a = 0; a < dir.size(); ++a) dir.data()[a] = gauss(rng);
        dir.normalize();
      }
      Eigen::MatrixXd cand = orthonormal_columns(w + step * (comp * dir));
      const double r = problem.radius(cand);
      if (r < best - f_tol) {
        best = r;
        w = std::move(cand);
        history.push_back(best);
        improved = true;
      }
    }
    step = improved ? std::min(2.0 * step, step_cap) : 0.5 * step;
  }
  return step < step_stop;
}

// Second stage: with the active vertices guessed from the pattern search,
// run Newton on the KKT system of  min t  s.t.  f_i(B, p) = t  (i active),
// where f_i is the squared distance of vertex i to the axis. The chart is
// W(B) = orth(W0 + comp * B) around the incoming frame.
class ActiveSetPolish {
 public:
  ActiveSetPolish(const LocalProblem& problem, const std::vector<RealVec>& local, const Eigen::MatrixXd& w0)
      : problem_(problem), local_(local), w0_(w0) {
    n_ = static_cast<int>(w0.rows());
    c_ = static_cast<int>(w0.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w0);
    const Eigen::MatrixXd full_q = qr.householderQ();
    comp_ = full_q.rightCols(n_ - c_);
    nb_ = (n_ - c_) * c_;
    dim_ = nb_ + n_;
  }

  Eigen::MatrixXd frame_at(const Eigen::VectorXd& x) const {
    const Eigen::Map<const Eigen::MatrixXd> b(x.data(), n_ - c_, c_);
    return orthonormal_columns(w0_ + comp_ * b);
  }

  Eigen::VectorXd pieces(const Eigen::VectorXd& x, const std::vector<std::size_t>& active) const {
    const Eigen::MatrixXd w = frame_at(x);
    const auto p = x.tail(n_);
    Eigen::VectorXd f(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const RealVec& y = local_[active[k]];
      f[static_cast<Eigen::Index>(k)] = (y - w * (w.transpose() * y) - p).squaredNorm();
    }
    return f;
  }

  // Returns the improved frame, or w0 when nothing better was found.
  Eigen::MatrixXd run(const std::vector<std::size_t>& active, const RealVec& center, double start_radius) const {
    const auto m = static_cast<Eigen::Index>(active.size());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
    x.tail(n_) = center;
    Eigen::VectorXd f = pieces(x, active);
    double t = f.maxCoeff();

    Eigen::MatrixXd grad = gradients(x, active);
    Eigen::VectorXd lambda;
    {
      Eigen::MatrixXd a(dim_ + 1, m);
      a.topRows(dim_) = grad;
      a.row(dim_).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim_ + 1);
      rhs[dim_] = 1.0;
      lambda = a.completeOrthogonalDecomposition().solve(rhs);
    }

    Eigen::MatrixXd best_w = w0_;
    double best_r = start_radius;
    auto residual = [&](const Eigen::VectorXd& xx, double tt, const Eigen::VectorXd& ll, const Eigen::MatrixXd& g) {
      Eigen::VectorXd r(dim_ + 1 + m);
      r.head(dim_) = g * ll;
      r[dim_] = 1.0 - ll.sum();
      r.tail(m) = pieces(xx, active).array() - tt;
      return r;
    };
    Eigen::VectorXd res = residual(x, t, lambda, grad);

    for (int iter = 0; iter < 40 && res.norm() > 1e-15; ++iter) {
      const Eigen::MatrixXd hess = lagrangian_hessian(x, active, lambda);
      const Eigen::Index size = dim_ + 1 + m;
      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(size, size);
      jac.topLeftCorner(dim_, dim_) = hess;
      jac.block(0, dim_ + 1, dim_, m) = grad;
      jac.block(dim_, dim_ + 1, 1, m).setConstant(-1.0);
      jac.block(dim_ + 1, 0, m, dim_) = grad.transpose();
      jac.block(dim_ + 1, dim_, m, 1).setConstant(-1.0);
      const Eigen::VectorXd delta = jac.completeOrthogonalDecomposition().solve(-res);

      bool accepted = false;
      for (double alpha = 1.0; alpha > 1e-4; alpha *= 0.5) {
        const Eigen::VectorXd xn = x + alpha * delta.head(dim_);
        const double tn = t + alpha * delta[dim_];
        const Eigen::VectorXd ln = lambda + alpha * delta.tail(m);
        const Eigen::MatrixXd gn = gradients(xn, active);
        const Eigen::VectorXd rn = residual(xn, tn, ln, gn);
        if (rn.norm() < res.norm()) {
          x = xn;
          t = tn;
          lambda = ln;
          grad = gn;
          res = rn;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const Eigen::MatrixXd w = frame_at(x);
      const double r = problem_.radius(w);
      if (r < best_r) {
        best_r = r;
        best_w = w;
      }
    }
    return best_w;
  }

 private:
  Eigen::MatrixXd gradients(const Eigen::VectorXd& x, const std::vector<std::size_t>& active) const {
    constexpr double h = 1e-6;
    Eigen::MatrixXd g(dim_, static_cast<Eigen::Index>(active.size()));
    Eigen::VectorXd xp = x;
    for (int a = 0; a < dim_; ++a) {
      xp[a] = x[a] + h;
      const Eigen::VectorXd fp = pieces(xp, active);
      xp[a] = x[a] - h;
      const Eigen::VectorXd fm = pieces(xp, active);
      xp[a] = x[a];
      g.row(a) = ((fp - fm) / (2.0 * h)).transpose();
    }
    return g;
  }

  Eigen::MatrixXd lagrangian_hessian(const Eigen::VectorXd& x, const std::vector<std::size_t>& active,
                                     const Eigen::VectorXd& lambda) const {
    constexpr double h = 1e-4;
    Eigen::MatrixXd hess(dim_, dim_);
    Eigen::VectorXd xp = x;
    const double f0 = lambda.dot(pieces(x, active));
    for (int a = 0; a < dim_; ++a) {
      for (int b = a; b < dim_; ++b) {
        double v;
        if (a == b) {
          xp[a] = x[a] + h;
          const double fp = lambda.dot(pieces(xp, active));
          xp[a] = x[a] - h;
          const double fm = lambda.dot(pieces(xp, active));
          v = (fp - 2.0 * f0 + fm) / (h * h);
        } else {
          double acc = 0.0;
          for (int sa = -1; sa <= 1; sa += 2) {
            for (int sb = -1; sb <= 1; sb += 2) {
              xp[a] = x[a] + sa * h;
              xp[b] = x[b] + sb * h;
              acc += sa * sb * lambda.dot(pieces(xp, active));
            }
          }
          v = acc / (4.0 * h * h);
        }
        xp[a] = x[a];
        xp[b] = x[b];
        hess(a, b) = hess(b, a) = v;
      }
    }
    return hess;
  }

  const LocalProblem& problem_;
  const std::vector<RealVec>& local_;
  Eigen::MatrixXd w0_;
  Eigen::MatrixXd comp_;
  int n_ = 0;
  int c_ = 0;
  int nb_ = 0;
  int dim_ = 0;
};

// Proximal minimax steps on F(B, p) = max_i f_i(B, p), f_i the squared
// distance of vertex i to the axis. Each step minimizes the linearized max
// plus (mu/2)|d|^2 through its dual, a concave QP over the simplex of
// multipliers, solved exactly by enumerating supports. This is what moves
// along the nonsmooth ridges where pattern search stalls.
class MinimaxDescent {
 public:
  explicit MinimaxDescent(const LocalProblem& problem) : problem_(problem) {}

  // Returns the number of accepted steps.
  int run(Eigen::MatrixXd& w, double& radius, std::vector<double>& history, int max_steps) const {
    const int n = problem_.dim();
    const int c = static_cast<int>(w.cols());
    const auto& pts = problem_.points();
    double mu = 1.0;
    int accepted = 0;
    Ball ball = problem_.ball(w);
    for (int step = 0; step < max_steps; ++step) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
      const Eigen::MatrixXd full_q = qr.householderQ();
      const Eigen::MatrixXd comp = full_q.rightCols(n - c);
      const int nb = (n - c) * c;
      const int dim = nb + n;

      // Pieces and their gradients at B = 0, p = ball center.
      const auto m = static_cast<Eigen::Index>(pts.size());
      Eigen::VectorXd f(m);
      Eigen::MatrixXd g(dim, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const RealVec& y = pts[static_cast<std::size_t>(i)];
        const RealVec r = y - w * (w.transpose() * y) - ball.center;
        f[i] = r.squaredNorm();
        const Eigen::MatrixXd gb = -2.0 * (comp.transpose() * r) * (w.transpose() * y).transpose();
        g.col(i).head(nb) = Eigen::Map<const Eigen::VectorXd>(gb.data(), nb);
        g.col(i).tail(n) = -2.0 * r;
      }
      const double big_f = f.maxCoeff();

      std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
      for (Eigen::Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return f[a] > f[b]; });
      order.resize(std::min({order.size(), static_cast<std::size_t>(dim) + 1, kMaxPieces}));

      const Eigen::VectorXd d = proximal_step(f, g, order, mu);
      const double model = (f + g.transpose() * d).maxCoeff();
      const double predicted = big_f - model;
      if (!(predicted > 1e-15 * big_f) || d.norm() < 1e-14) break;

      const Eigen::Map<const Eigen::MatrixXd> db(d.data(), n - c, c);
      const Eigen::MatrixXd cand = orthonormal_columns(w + comp * db);
      const Ball cand_ball = problem_.ball(cand);
      const double actual = big_f - cand_ball.radius * cand_ball.radius;
      if (actual >= 0.1 * predicted && cand_ball.radius < radius) {
        w = cand;
        ball = cand_ball;
        radius = cand_ball.radius;
        history.push_back(radius);
        ++accepted;
        mu = std::max(0.5 * mu, 1e-10);
      } else {
        mu *= 4.0;
        if (mu > 1e14) break;
      }
    }
    return accepted;
  }

 private:
  static constexpr std::size_t kMaxPieces = 10;

  // argmin_d max_{i in set} (f_i + g_i . d) + (mu/2)|d|^2 via its dual
  //   max_{lambda in simplex} lambda . f - |G lambda|^2 / (2 mu).
  static Eigen::VectorXd proximal_step(const Eigen::VectorXd& f, const Eigen::MatrixXd& g,
                                       const std::vector<Eigen::Index>& set, double mu) {
    const auto k = static_cast<int>(set.size());
    Eigen::MatrixXd gs(g.rows(), k);
    Eigen::VectorXd fs(k);
    for (int a = 0; a < k; ++a) {
      gs.col(a) = g.col(set[static_cast<std::size_t>(a)]);
      fs[a] = f[set[static_cast<std::size_t>(a)]];
    }
    const Eigen::MatrixXd q = gs.transpose() * gs / mu;
    double best_val = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_lambda = Eigen::VectorXd::Zero(k);
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> sup;
      for (int a = 0; a < k; ++a) {
        if (mask & (1u << a)) sup.push_back(a);
      }
      const auto s = static_cast<Eigen::Index>(sup.size());
      // Stationarity on the face: Q_SS lambda + nu 1 = f_S, 1' lambda = 1.
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
      Eigen::VectorXd rhs(s + 1);
      for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = q(sup[a], sup[b]);
        kkt(a, s) = 1.0;
        kkt(s, a) = 1.0;
        rhs[a] = fs[sup[a]];
      }
      rhs[s] = 1.0;
      const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      Eigen::VectorXd lambda = Eigen::VectorXd::Zero(k);
      bool feasible = true;
      for (Eigen::Index a = 0; a < s; ++a) {
        if (!(sol[a] >= -1e-14)) feasible = false;
        lambda[sup[a]] = std::max(sol[a], 0.0);
      }
      if (!feasible || lambda.sum() <= 0.0) continue;
      lambda /= lambda.sum();
      const double val = lambda.dot(fs) - 0.5 * lambda.dot(q * lambda);
      if (val > best_val) {
        best_val = val;
        best_lambda = lambda;
      }
    }
    return -(gs * best_lambda) / mu;
  }

  const LocalProblem& problem_;
};

RefineOutcome refine(const LocalProblem& problem, Eigen::MatrixXd w, const SearchConfig& cfg, std::uint64_t seed) {
  RefineOutcome out;
  const int n = problem.dim();
  const int c = static_cast<int>(w.cols());
  double best = problem.radius(w);
  out.history.push_back(best);
  if (c == 0 || c == n) {
    out.frame = std::move(w);
    out.converged = true;
    return out;
  }

  std::mt19937_64 rng(seed);
  int budget = cfg.max_iters;
  constexpr double kCoarse = 1e-6;
  const double coarse_stop = std::max(kCoarse, cfg.step_tol);
  // A rough pattern search finds the basin, the minimax steps follow the
  // ridges into the kink, and a second pattern search cleans up.
  const double rough_stop = std::max(1e-3, coarse_stop);
  pattern_search(problem, w, best, cfg.initial_step, rough_stop, budget, rng, out.history, cfg.f_tol);
  MinimaxDescent(problem).run(w, best, out.history, 200);
  pattern_search(problem, w, best, rough_stop, coarse_stop, budget, rng, out.history, cfg.f_tol);

  if (coarse_stop > cfg.step_tol) {
    const Ball ball = problem.ball(w);
    const ActiveSetPolish polish(problem, problem.points(), w);
    Eigen::MatrixXd best_w = w;
    double best_r = best;
    std::vector<double> gaps(problem.points().size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const RealVec& y = problem.points()[i];
      gaps[i] = ball.radius - (y - w * (w.transpose() * y) - ball.center).norm();
    }
    std::vector<std::size_t> previous;
    for (double band : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (gaps[i] <= band * (1.0 + ball.radius)) active.push_back(i);
      }
      if (active.size() < 2 || active == previous) continue;
      previous = active;
      const Eigen::MatrixXd cand = polish.run(active, ball.center, best);
      const double r = problem.radius(cand);
      if (r < best_r - cfg.f_tol) {
        best_r = r;
        best_w = cand;
      }
    }
    if (best_r < best) {
      best = best_r;
      w = best_w;
      out.history.push_back(best);
    }
    out.converged = pattern_search(problem, w, best, coarse_stop, cfg.step_tol, budget, rng, out.history, cfg.f_tol);
  } else {
    out.converged = true;
  }
  out.frame = std::move(w);
  return out;
}

Eigen::MatrixXd search_space(const Polytope& polytope, const Frame& frame) {
  Eigen::MatrixXd dirs = affine_direction_basis(polytope.vertices);
  if (frame.empty()) return dirs;
  const Eigen::MatrixXd outside = frame.matrix() - dirs * (dirs.transpose() * frame.matrix());
  if (outside.cwiseAbs().maxCoeff() <= 1e-9) return dirs;
  return Eigen::MatrixXd::Identity(polytope.ambient_dim(), polytope.ambient_dim());
}

}  // namespace

int default_starts(int n, int j) { return 16 * (n - j + 1); }

Frame random_frame(int dim, int count, std::uint64_t seed) {
  if (count < 0 || count > dim) throw Error(ErrorKind::InvalidInput, "frame count must lie in [0, dim]");
  if (count == 0) return Frame(dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<RealVec> cols(count, RealVec(dim));
    for (auto& col : cols) {
      for (int i = 0; i < dim; ++i) col[i] = gauss(rng);
    }
    try {
      return orthonormalize(cols);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankDeficient) throw;
    }
  }
  throw Error(ErrorKind::RankDeficient, "could not draw an independent Gaussian frame");
}

Frame local_refine(const Polytope& polytope, const Frame& frame, const SearchConfig& cfg) {
  if (frame.empty()) return frame;
  const LocalProblem problem(polytope, search_space(polytope, frame));
  const Eigen::MatrixXd w0 = problem.basis().transpose() * frame.matrix();
  const auto outcome = refine(problem, orthonormal_columns(w0), cfg, splitmix64(cfg.seed));
  if (outcome.history.size() == 1) return frame;
  return Frame::from_orthonormal(problem.basis() * outcome.frame, 1e-10);
}

SearchResult minimize_rj(const Polytope& polytope, int j, const SearchConfig& cfg) {
  const LocalProblem problem(polytope, affine_direction_basis(polytope.vertices));
  const int n = problem.dim();
  if (j < 1 || j > n) {
    throw Error(ErrorKind::InvalidJ, "j must lie in [1, " + std::to_string(n) + "], got " + std::to_string(j));
  }
  const int count = n - j;
  const int starts = cfg.starts > 0 ? cfg.starts : default_starts(n, j);
  const int runs = count == 0 ? 1 : starts;

  std::vector<RefineOutcome> outcomes(runs);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int s = next++; s < runs; s = next++) {
      const std::uint64_t seed = splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(s)));
      const Frame start = random_frame(n, count, seed);
      outcomes[s] = refine(problem, start.matrix(), cfg, splitmix64(seed));
    }
  };
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  SearchResult result;
  result.starts = runs;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < runs; ++s) {
    const double r = outcomes[s].history.back();
    result.start_radii.push_back(r);
    if (outcomes[s].converged) ++result.converged_starts;
    if (r < best) {
      best = r;
      result.best_start = s;
    }
  }
  const auto& winner = outcomes[result.best_start];
  result.objective_history = winner.history;
  const Eigen::MatrixXd ambient = problem.basis() * winner.frame;
  const Frame axis = count == 0 ? Frame(polytope.ambient_dim()) : Frame::from_orthonormal(ambient, 1e-10);
  result.best = cylinder_radius(polytope, axis);
  return result;
}

}  // namespace outer_radii
