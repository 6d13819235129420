#include "reluriesz/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "reluriesz/errors.hpp"
#include "reluriesz/lattice.hpp"
#include "reluriesz/rng.hpp"

namespace reluriesz {

namespace {

template <class F>
SampleSet draw_impl(const F& f, std::size_t N, std::uint64_t seed) {
  if (N < 1) throw DomainError("draw_samples: N must be at least 1");
  f.validate();
  SampleSet out;
  out.dim = f.dim;
  out.seed = seed;
  out.generator_id = std::string(Rng::kGeneratorId);
  Rng rng(derive_seed(seed, "draw_samples"));
  out.points.reserve(N);
  out.values.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> x(static_cast<std::size_t>(f.dim));
    for (auto& v : x) v = rng.uniform();
    out.values.push_back(evaluate(f, x));
    out.points.push_back(std::move(x));
  }
  return out;
}

Eigen::VectorXd values_vector(const SampleSet& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.values.data(), static_cast<Eigen::Index>(s.values.size()));
}

void check_samples(const SampleSet& s) {
  if (s.points.size() != s.values.size()) throw ValidationError("sample set: points and values differ in length");
  if (s.points.empty()) throw UsageError("sample set is empty");
}

// Euclidean projection onto {c : ||A c - y||_2 <= radius} through a thin SVD of A.
class ResidualBallProjector {
 public:
  ResidualBallProjector(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double radius) : radius_(radius) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() ? sv(0) : 0.0) * static_cast<double>(std::max(A.rows(), A.cols())) *
                          std::numeric_limits<double>::epsilon();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    sigma_ = sv.head(r);
    V_ = svd.matrixV().leftCols(r);
    const Eigen::MatrixXd U = svd.matrixU().leftCols(r);
    b_ = U.transpose() * y;
    perp_sq_ = (y - U * b_).squaredNorm();
  }

  double min_residual() const { return std::sqrt(perp_sq_); }

  Eigen::VectorXd project(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd a = V_.transpose() * v;
    const Eigen::VectorXd g = sigma_.cwiseProduct(a) - b_;
    const double target = radius_ * radius_ - perp_sq_;
    if (g.squaredNorm() <= target) return v;
    if (target <= 0.0) {
      // Only the least-squares affine set is feasible.
      return v + V_ * (b_.cwiseQuotient(sigma_) - a);
    }
    // h(lambda) = sum g_i^2 / (1 + lambda s_i^2)^2 - target is convex and
    // decreasing, so Newton from lambda = 0 increases monotonically to the root.
    const Eigen::VectorXd s2 = sigma_.cwiseAbs2();
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
      const Eigen::ArrayXd denom = 1.0 + lambda * s2.array();
      const double h = (g.array().square() / denom.square()).sum() - target;
      const double dh = -2.0 * (g.array().square() * s2.array() / denom.cube()).sum();
      if (h <= 0.0 || dh == 0.0) break;
      const double step = -h / dh;
      lambda += step;
      if (step <= 1e-15 * lambda) break;
    }
    const Eigen::ArrayXd denom = 1.0 + lambda * s2.array();
    const Eigen::VectorXd shift = (-lambda * sigma_.array() * g.array() / denom).matrix();
    return v + V_ * shift;
  }

 private:
  double radius_;
  Eigen::VectorXd sigma_;
  Eigen::MatrixXd V_;
  Eigen::VectorXd b_;
  double perp_sq_ = 0.0;
};

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
  return v.unaryExpr([t](double x) { return x > t ? x - t : (x < -t ? x + t : 0.0); });
}

struct FistaResult {
  Eigen::VectorXd c;
  std::size_t iterations = 0;
};

// min 1/2 ||A c - y||^2 + lambda ||c||_1 by FISTA with step 1 / ||A||_2^2.
FistaResult lasso_fista(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double lambda, double lipschitz,
                        Eigen::VectorXd start, std::size_t max_iter, double tol) {
  Eigen::VectorXd x = std::move(start);
  Eigen::VectorXd z = x;
  double t = 1.0;
  FistaResult out;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd grad = A.transpose() * (A * z - y);
    const Eigen::VectorXd next = soft_threshold(z - grad / lipschitz, lambda / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / t_next) * (next - x);
    const double change = (next - x).norm();
    x = next;
    t = t_next;
    out.iterations = it + 1;
    if (change <= tol * std::max(1.0, x.norm())) break;
  }
  out.c = std::move(x);
  return out;
}

struct HomotopyResult {
  Eigen::VectorXd c;
  std::size_t steps = 0;
  bool reached = false;
};

// LASSO path from lambda = max |A^T y| downwards, stopped where ||A c - y||_2 first
// drops to the radius. On that path the stopping point solves the constrained problem.
HomotopyResult lasso_homotopy(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, double radius, std::size_t max_steps) {
  const auto n = A.cols();
  HomotopyResult out{Eigen::VectorXd::Zero(n)};
  Eigen::VectorXd res = y;
  Eigen::VectorXd corr = A.transpose() * y;
  Eigen::Index first = 0;
  double lambda = corr.cwiseAbs().maxCoeff(&first);
  std::vector<Eigen::Index> active{first};
  std::vector<char> in_active(static_cast<std::size_t>(n), 0);
  in_active[static_cast<std::size_t>(first)] = 1;
  Eigen::VectorXd& c = out.c;
  // A coefficient that just hit zero sits exactly on the bound and must not re-enter at once.
  Eigen::Index dropped = -1;

  for (; out.steps < max_steps; ++out.steps) {
    if (res.norm() <= radius) {
      out.reached = true;
      return out;
    }
    const auto m = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd AJ(A.rows(), m);
    Eigen::VectorXd sJ(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto col = active[static_cast<std::size_t>(j)];
      AJ.col(j) = A.col(col);
      const double v = c(col) != 0.0 ? c(col) : corr(col);
      sJ(j) = v > 0.0 ? 1.0 : -1.0;
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(AJ.transpose() * AJ);
    if (ldlt.info() != Eigen::Success) return out;
    const Eigen::VectorXd dJ = ldlt.solve(sJ);
    const Eigen::VectorXd move = AJ * dJ;
    const Eigen::VectorXd a = A.transpose() * move;

    // Largest step before an inactive correlation reaches the bound or an active coefficient hits zero.
    double gamma = lambda;
    Eigen::Index enter = -1, leave = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || j == dropped) continue;
      for (double cand : {(lambda - corr(j)) / (1.0 - a(j)), (lambda + corr(j)) / (1.0 + a(j))})
        if (cand > 1e-14 * lambda && cand < gamma) {
          gamma = cand;
          enter = j;
        }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto col = active[static_cast<std::size_t>(j)];
      if (c(col) == 0.0) continue;
      const double cand = -c(col) / dJ(j);
      if (cand > 1e-14 * lambda && cand < gamma) {
        gamma = cand;
        enter = -1;
        leave = j;
      }
    }

    // ||res - g move||^2 = radius^2 may happen first.
    const double qa = move.squaredNorm(), qb = -2.0 * res.dot(move), qc = res.squaredNorm() - radius * radius;
    const double disc = qb * qb - 4.0 * qa * qc;
    bool stop = false;
    if (qa > 0.0 && disc >= 0.0) {
      const double root = (-qb - std::sqrt(disc)) / (2.0 * qa);
      if (root >= 0.0 && root <= gamma) {
        gamma = root;
        stop = true;
      }
    }

    for (Eigen::Index j = 0; j < m; ++j) c(active[static_cast<std::size_t>(j)]) += gamma * dJ(j);
    res = y - A * c;
    corr = A.transpose() * res;
    lambda -= gamma;
    if (stop) {
      out.reached = true;
      ++out.steps;
      return out;
    }
    dropped = -1;
    if (leave >= 0) {
      const auto col = active[static_cast<std::size_t>(leave)];
      dropped = col;
      c(col) = 0.0;
      in_active[static_cast<std::size_t>(col)] = 0;
      active.erase(active.begin() + leave);
    } else if (enter >= 0) {
      if (static_cast<Eigen::Index>(active.size()) >= A.rows()) return out;
      active.push_back(enter);
      in_active[static_cast<std::size_t>(enter)] = 1;
    } else {
      return out;  // lambda reached zero above the radius
    }
  }
  return out;
}

bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const Eigen::VectorXd& c, double radius, double slack) {
  return (A * c - y).norm() <= radius + slack;
}

}  // namespace

SampleSet draw_samples(const RieszCoeffs& f, std::size_t N, std::uint64_t seed) { return draw_impl(f, N, seed); }

SampleSet draw_samples(const FourierCoeffs& f, std::size_t N, std::uint64_t seed) { return draw_impl(f, N, seed); }

std::vector<BasisId> recovery_basis(double R, int d) {
  std::vector<BasisId> ids{BasisId::constant()};
  for (auto& k : enumerate_half_ball(BallSpec::from_radius(R, d))) {
    ids.push_back(BasisId::cos(k));
    ids.push_back(BasisId::sin(std::move(k)));
  }
  return ids;
}

Eigen::MatrixXd design_matrix(const std::vector<std::vector<double>>& points, const std::vector<BasisId>& ids) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < ids.size(); ++j) {
      const auto& id = ids[j];
      if (id.kind != BasisKind::Const && id.index.dim() != points[i].size())
        throw DimensionError("design_matrix: point " + std::to_string(i) + " has the wrong dimension");
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval_basis(id, points[i]);
    }
  return A;
}

RieszCoeffs coeffs_from_vector(const std::vector<BasisId>& ids, const Eigen::VectorXd& c, int d) {
  if (static_cast<Eigen::Index>(ids.size()) != c.size()) throw DimensionError("coeffs_from_vector: length mismatch");
  RieszCoeffs out(d);
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const double v = c(static_cast<Eigen::Index>(j));
    const auto& id = ids[j];
    if (id.kind == BasisKind::Const) {
      out.constant += v;
    } else if (v != 0.0) {
      out.add(id.index, id.kind == BasisKind::Cos ? v : 0.0, id.kind == BasisKind::Sin ? v : 0.0);
    }
  }
  out.prune();
  return out;
}

Eigen::VectorXd vector_from_coeffs(const std::vector<BasisId>& ids, const RieszCoeffs& g) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const auto& id = ids[j];
    if (id.kind == BasisKind::Const) {
      out(static_cast<Eigen::Index>(j)) = g.constant;
      continue;
    }
    auto it = g.terms.find(id.index);
    if (it == g.terms.end()) continue;
    out(static_cast<Eigen::Index>(j)) = id.kind == BasisKind::Cos ? it->second.c : it->second.s;
  }
  return out;
}

std::string method_name(RecoveryMethod m) { return m == RecoveryMethod::LeastSquares ? "ls" : "bp"; }

RecoveryMethod parse_method(const std::string& name) {
  if (name == "ls") return RecoveryMethod::LeastSquares;
  if (name == "bp") return RecoveryMethod::BasisPursuit;
  throw UsageError("unknown recovery method '" + name + "' (expected ls or bp)");
}

Recovery least_squares_recover(const SampleSet& samples, double R) {
  check_samples(samples);
  const auto ids = recovery_basis(R, samples.dim);
  const std::size_t N = samples.size();
  if (N < ids.size())
    throw UsageError("least squares needs at least n = " + std::to_string(ids.size()) + " samples, got " + std::to_string(N));
  const Eigen::MatrixXd A = design_matrix(samples.points, ids);
  const Eigen::VectorXd y = values_vector(samples);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd c = cod.solve(y);

  Recovery out{coeffs_from_vector(ids, c, samples.dim), {}};
  auto& r = out.report;
  r.method = RecoveryMethod::LeastSquares;
  r.radius = R;
  r.n_basis = ids.size();
  r.n_samples = N;
  const Eigen::VectorXd resid = A * c - y;
  r.residual_rms = resid.norm() / std::sqrt(static_cast<double>(N));
  r.normal_residual = (A.transpose() * resid).cwiseAbs().maxCoeff();
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(A / std::sqrt(static_cast<double>(N))).singularValues();
  r.sigma_max = sv(0);
  r.sigma_min = sv(sv.size() - 1);
  r.rank_deficient = cod.rank() < A.cols();
  r.solver_path = "cod";
  return out;
}

double default_delta(double s, double R) {
  if (!(R > 0.0)) throw DomainError("default_delta: R must be positive");
  return barron_tail_constant(s) * std::pow(R, -s);
}

Recovery basis_pursuit_recover(const SampleSet& samples, double R, double delta, const BasisPursuitOptions& options) {
  check_samples(samples);
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("basis pursuit: delta must be finite and nonnegative");
  const auto ids = recovery_basis(R, samples.dim);
  const Eigen::MatrixXd A = design_matrix(samples.points, ids);
  const Eigen::VectorXd y = values_vector(samples);
  const double sqrtN = std::sqrt(static_cast<double>(samples.size()));
  const double radius = delta * sqrtN;
  const double tol = options.tolerance;
  const double y_scale = std::max(y.norm(), std::numeric_limits<double>::min());
  const double slack = tol * y_scale;
  const auto n = A.cols();

  Recovery out;
  auto& rep = out.report;
  rep.method = RecoveryMethod::BasisPursuit;
  rep.radius = R;
  rep.n_basis = ids.size();
  rep.n_samples = samples.size();
  rep.delta = delta;
  {
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(A / sqrtN).singularValues();
    rep.sigma_max = sv(0);
    rep.sigma_min = sv(sv.size() - 1);
  }

  auto finish = [&](const Eigen::VectorXd& c, std::string path) {
    const Eigen::VectorXd resid = A * c - y;
    rep.residual_rms = resid.norm() / sqrtN;
    rep.normal_residual = (A.transpose() * resid).cwiseAbs().maxCoeff();
    rep.solver_path = std::move(path);
    out.coeffs = coeffs_from_vector(ids, c, samples.dim);
    return out;
  };

  if (y.norm() <= radius) return finish(Eigen::VectorXd::Zero(n), "zero");

  const ResidualBallProjector proj(A, y, radius);
  if (proj.min_residual() > radius + slack)
    throw DomainError("basis pursuit: delta = " + std::to_string(delta) + " is below the smallest achievable RMS residual " +
                      std::to_string(proj.min_residual() / sqrtN));

  {
    // Aim just inside the ball so rounding cannot leave the result outside it.
    const auto h = lasso_homotopy(A, y, radius * (1.0 - 1e-7), options.max_iterations);
    if ((h.reached || radius == 0.0) && feasible(A, y, h.c, radius, slack)) {
      rep.iterations = h.steps;
      rep.converged = true;
      return finish(h.c, "homotopy");
    }
  }

  // ADMM on min ||z||_1 + indicator(c in ball) subject to c = z.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd c = proj.project(z);
  double rho = 1.0 / std::max(y.norm() / sqrtN, 1e-300);
  bool converged = false;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    c = proj.project(z - u);
    const Eigen::VectorXd z_old = z;
    z = soft_threshold(c + u, 1.0 / rho);
    u += c - z;
    const double primal = (c - z).norm();
    const double change = (z - z_old).norm();
    const double scale = std::max(c.norm(), 1e-300);
    if (primal <= tol * scale && change <= tol * scale) {
      converged = true;
      ++it;
      break;
    }
    if (it % 10 == 9) {
      const double dual = rho * change;
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  rep.iterations = it;

  // Least squares on the support of z; kept when feasible and no worse in l1.
  auto polish = [&](const Eigen::VectorXd& zs, const Eigen::VectorXd& current) -> std::optional<Eigen::VectorXd> {
    const double zmax = zs.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < n; ++j)
      if (zmax > 0.0 && std::abs(zs(j)) > 1e-9 * zmax) support.push_back(j);
    if (support.empty() || support.size() > static_cast<std::size_t>(A.rows())) return std::nullopt;
    Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) As.col(static_cast<Eigen::Index>(j)) = A.col(support[j]);
    const Eigen::VectorXd cs = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(As).solve(y);
    Eigen::VectorXd cp = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < support.size(); ++j) cp(support[j]) = cs(static_cast<Eigen::Index>(j));
    if (feasible(A, y, cp, radius, slack) && cp.lpNorm<1>() <= current.lpNorm<1>() * (1.0 + 1e-12)) return cp;
    return std::nullopt;
  };

  std::string path = converged ? "admm" : "admm-maxiter";
  bool polished = false;
  if (options.polish) {
    if (auto cp = polish(z, c)) {
      c = *cp;
      polished = true;
    }
  }

  if (!converged && !polished) {
    // Penalized form with bisection on lambda until the residual sits on the constraint.
    const double lipschitz = std::pow(rep.sigma_max * sqrtN, 2);
    double lo = 0.0;
    double hi = (A.transpose() * y).cwiseAbs().maxCoeff();
    Eigen::VectorXd best = c;
    bool located = false;
    for (int b = 0; b < 100 && !located; ++b) {
      const double lambda = 0.5 * (lo + hi);
      const auto fista = lasso_fista(A, y, lambda, lipschitz, best, 20'000, tol);
      rep.iterations += fista.iterations;
      const double res = (A * fista.c - y).norm();
      if (res > radius) {
        hi = lambda;
      } else {
        lo = lambda;
        best = fista.c;
      }
      located = std::abs(res - radius) <= 1e-6 * std::max(radius, slack);
      if (located) best = fista.c;
    }
    if (!located)
      throw SolverError("basis pursuit did not converge: ADMM stopped after " + std::to_string(it) +
                        " iterations and the penalized fallback could not locate the constraint");
    c = proj.project(best);
    path = "fista-bisection";
    if (options.polish) {
      if (auto cp = polish(c, c)) {
        c = *cp;
        polished = true;
      }
    }
  }
  if (polished) path += "+polish";
  rep.converged = converged || polished || path.starts_with("fista");
  return finish(c, path);
}

namespace {

double sigma_k_l1(const RieszCoeffs& head, std::size_t k) {
  std::vector<double> mags;
  for (const auto& [idx, cp] : head.terms) {
    if (cp.c != 0.0) mags.push_back(std::abs(cp.c));
    if (cp.s != 0.0) mags.push_back(std::abs(cp.s));
  }
  if (head.constant != 0.0) mags.push_back(std::abs(head.constant));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double rest = 0.0;
  for (std::size_t i = k; i < mags.size(); ++i) rest += mags[i];
  return rest;
}

template <class Truth>
ErrorReport error_report_impl(const Truth& truth, const RieszCoeffs& recovered, const ErrorReportOptions& o,
                              const RieszCoeffs& truth_riesz, double truth_norm, double l2_exact) {
  if (truth.dim != recovered.dim) throw DimensionError("recovery_error_report: dimension mismatch");
  ErrorReport out;
  out.l2_exact = l2_exact;
  const auto head = truncate_radius(truth_riesz, o.radius, o.s).head;
  const double sigma = sigma_k_l1(head, o.k);
  const double kd = static_cast<double>(std::max<std::size_t>(o.k, 1));
  for (double p : o.p_list) {
    out.lp.push_back(lp_norm_mc([&](std::span<const double> x) { return evaluate(truth, x) - evaluate(recovered, x); },
                                truth.dim, p, o.n_mc, o.seed));
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    out.two_term_bound.push_back(o.constant * (std::pow(kd, -inv_p) * sigma +
                                               std::pow(kd, 0.5 - inv_p) * std::pow(o.radius, -o.s) * truth_norm));
  }
  return out;
}

}  // namespace

ErrorReport recovery_error_report(const RieszCoeffs& truth, const RieszCoeffs& recovered, const ErrorReportOptions& options) {
  const double l2 = l2_norm(linear_combination(1.0, truth, -1.0, recovered));
  return error_report_impl(truth, recovered, options, truth, norm_bs_seq(truth, options.s), l2);
}

ErrorReport recovery_error_report(const FourierCoeffs& truth, const RieszCoeffs& recovered, const ErrorReportOptions& options) {
  const double sq = l2_inner(truth, truth) - 2.0 * l2_inner(truth, recovered) + l2_inner(recovered, recovered);
  const auto conv = fourier_to_riesz(truth);
  return error_report_impl(truth, recovered, options, conv.coeffs, norm_bs(truth, options.s), std::sqrt(std::max(0.0, sq)));
}

}  // namespace reluriesz
