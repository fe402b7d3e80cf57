#include "pddcov/clime.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "pddcov/errors.hpp"
#include "pddcov/parallel.hpp"

namespace pddcov {

namespace {

constexpr int kBatchColumns = 64;  // fixed batch width keeps results
                                   // independent of the thread count

void check_config(const ClimeConfig& cfg) {
  if (!(cfg.lambda1 > 0.0)) throw BadParam("lambda1 must be positive");
  if (!(cfg.epsilon >= 0.0)) throw BadParam("epsilon must be nonnegative");
  if (!(cfg.solver_tol > 0.0) || cfg.solver_tol > 1e-3) {
    throw BadParam("solver_tol must lie in (0, 1e-3]");
  }
  if (cfg.max_iter < 1) throw BadParam("max_iter must be positive");
  if (cfg.xi && !(*cfg.xi >= 0.0)) throw BadParam("xi must be nonnegative");
}

// ADMM on the split form
//   min |g|_1 + indicator(|z|_inf <= lambda)
//   s.t. Sigma b - e = z,  b = g
// with penalty parameter rho = 200/lambda: the box constraint has scale
// lambda, and weighting the penalty well above 1/lambda keeps the primal
// residuals (which gate retirement) ahead of the objective descent. Both
// constraint blocks share rho, so it cancels from the b-update normal
// equations: (Sigma^2 + I) b = Sigma (e + z - u1) + (g - u2), one cached
// Cholesky factor shared by every column. The z-update clips; the g-update
// soft-thresholds at 1/rho, so returned solutions carry exact zeros.
//
// Solves the columns in `cols` of the identity right-hand side; writes
// solutions into beta_out and bookkeeping into residual_out/iters_out
// (indexed by global column). Converged columns are retired from the batch.
void solve_columns(const DenseMatrix& sigma,
                   const Eigen::LLT<DenseMatrix>& normal_llt, double lambda,
                   const ClimeConfig& cfg, const std::vector<int>& cols,
                   const DenseMatrix* warm, DenseMatrix& beta_out,
                   std::vector<double>& residual_out,
                   std::vector<int>& iters_out) {
  const long p = sigma.rows();
  long m = static_cast<long>(cols.size());
  std::vector<int> active(cols);

  const double tol = cfg.solver_tol;
  const double shrink = lambda / 200.0;  // soft-threshold step 1/rho

  DenseMatrix e = DenseMatrix::Zero(p, m);
  for (long j = 0; j < m; ++j) e(active[static_cast<size_t>(j)], j) = 1.0;
  DenseMatrix b = DenseMatrix::Zero(p, m);
  DenseMatrix g = DenseMatrix::Zero(p, m);
  DenseMatrix z = DenseMatrix::Zero(p, m);
  DenseMatrix u1 = DenseMatrix::Zero(p, m);
  DenseMatrix u2 = DenseMatrix::Zero(p, m);
  if (warm != nullptr) {
    for (long j = 0; j < m; ++j) {
      b.col(j) = warm->col(active[static_cast<size_t>(j)]);
    }
    g = b;
    z = (sigma * b - e).cwiseMax(-lambda).cwiseMin(lambda);
  }

  auto retire = [&](long j, int iter, double resid) {
    const int col = active[static_cast<size_t>(j)];
    beta_out.col(col) = g.col(j);
    residual_out[static_cast<size_t>(col)] = resid;
    iters_out[static_cast<size_t>(col)] = iter;
    const long last = m - 1;
    if (j != last) {
      active[static_cast<size_t>(j)] = active[static_cast<size_t>(last)];
      e.col(j) = e.col(last);
      b.col(j) = b.col(last);
      g.col(j) = g.col(last);
      z.col(j) = z.col(last);
      u1.col(j) = u1.col(last);
      u2.col(j) = u2.col(last);
    }
    active.pop_back();
    --m;
    e.conservativeResize(p, m);
    b.conservativeResize(p, m);
    g.conservativeResize(p, m);
    z.conservativeResize(p, m);
    u1.conservativeResize(p, m);
    u2.conservativeResize(p, m);
  };

  for (int iter = 1; iter <= cfg.max_iter && m > 0; ++iter) {
    b = normal_llt.solve(sigma * (e + z - u1) + (g - u2));
    const DenseMatrix sb = sigma * b;
    const DenseMatrix z_new =
        (sb - e + u1).cwiseMax(-lambda).cwiseMin(lambda);
    DenseMatrix g_new = b + u2;
    g_new = g_new.cwiseSign().cwiseProduct(
        (g_new.cwiseAbs().array() - shrink).max(0.0).matrix());

    const DenseMatrix r1 = sb - e - z_new;
    const DenseMatrix r2 = b - g_new;
    const DenseMatrix dg = g_new - g;
    const DenseMatrix dz = z_new - z;
    u1 += r1;
    u2 += r2;
    z = z_new;
    g = g_new;

    for (long j = m - 1; j >= 0; --j) {
      // all four increments vanishing makes the column a fixed point of the
      // ADMM map (a KKT point); any subset can transiently hit zero earlier
      const double worst =
          std::max({r1.col(j).lpNorm<Eigen::Infinity>(),
                    r2.col(j).lpNorm<Eigen::Infinity>(),
                    dg.col(j).lpNorm<Eigen::Infinity>(),
                    dz.col(j).lpNorm<Eigen::Infinity>()});
      if (worst >= tol) continue;
      // retire only once the iterate is measured feasible, which is the
      // contract on the returned solution (not just implied by small
      // residuals of the splitting variables)
      const double resid =
          (sigma * g.col(j) - e.col(j)).lpNorm<Eigen::Infinity>();
      if (resid <= lambda + tol) retire(j, iter, resid);
    }
  }

  if (m > 0) {
    // distinguish an infeasible constraint level from slow convergence by
    // probing the exactly-interpolating solution Sigma x = e
    const int col = active.front();
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(p);
    e0(col) = 1.0;
    const Eigen::LDLT<DenseMatrix> probe(sigma);
    if (probe.info() == Eigen::Success) {
      const Eigen::VectorXd x = probe.solve(e0);
      if ((sigma * x - e0).lpNorm<Eigen::Infinity>() > lambda) {
        throw Infeasible("column " + std::to_string(col) +
                         ": no vector satisfies the residual bound " +
                         std::to_string(lambda));
      }
    }
    const double res =
        (sigma * g.col(0) - e.col(0) - z.col(0)).lpNorm<Eigen::Infinity>();
    throw NotConverged("clime column " + std::to_string(col) +
                           " still moving after " +
                           std::to_string(cfg.max_iter) + " iterations",
                       cfg.max_iter, res);
  }
}

ClimeResult estimate_impl(const SymmetricMatrix& s, const ClimeConfig& cfg,
                          const DenseMatrix* warm) {
  check_config(cfg);
  const int p = s.dim();
  if (warm != nullptr && (warm->rows() != p || warm->cols() != p)) {
    throw DimMismatch("warm start must match the input dimension");
  }
  // a zero-variance coordinate has no meaningful precision row
  for (int i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0)) throw ZeroVariance(i);
  }
  const SymmetricMatrix sigma_eps = perturb(s, cfg.epsilon);
  const DenseMatrix& sig = sigma_eps.mat();
  Eigen::LLT<DenseMatrix> normal_llt(
      (sig * sig + DenseMatrix::Identity(p, p)).eval());
  if (normal_llt.info() != Eigen::Success) {
    throw SingularMatrix("could not factor the column-update system");
  }

  DenseMatrix beta(p, p);
  std::vector<double> residuals(static_cast<size_t>(p), 0.0);
  std::vector<int> iters(static_cast<size_t>(p), 0);
  const int batches = (p + kBatchColumns - 1) / kBatchColumns;
  parallel_for(batches, cfg.threads, [&](int chunk) {
    const int lo = chunk * kBatchColumns;
    const int hi = std::min(p, lo + kBatchColumns);
    std::vector<int> cols;
    for (int c = lo; c < hi; ++c) cols.push_back(c);
    solve_columns(sig, normal_llt, cfg.lambda1, cfg, cols, warm, beta,
                  residuals, iters);
  });

  // keep the entry of smaller magnitude; ties keep the upper-triangle entry
  DenseMatrix omega = beta;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < j; ++i) {
      const double keep =
          std::fabs(beta(i, j)) <= std::fabs(beta(j, i)) ? beta(i, j)
                                                         : beta(j, i);
      omega(i, j) = omega(j, i) = keep;
    }
  }

  ClimeResult out{SymmetricMatrix(omega), std::move(beta),
                  *std::max_element(residuals.begin(), residuals.end()),
                  std::move(iters)};
  if (cfg.xi) out.omega = clime_hard_threshold(out.omega, *cfg.xi);
  return out;
}

}  // namespace

double default_epsilon(int n) {
  if (n < 1) throw BadInput("sample size must be positive");
  return 1.0 / std::sqrt(static_cast<double>(n));
}

SymmetricMatrix perturb(const SymmetricMatrix& s, double epsilon) {
  if (!(epsilon >= 0.0)) throw BadParam("epsilon must be nonnegative");
  DenseMatrix out = s.mat();
  out.diagonal().array() += epsilon;
  return SymmetricMatrix(out);
}

ClimeColumnResult clime_column(const SymmetricMatrix& sigma_eps, int i,
                               double lambda1, const ClimeConfig& cfg) {
  ClimeConfig local = cfg;
  local.lambda1 = lambda1;
  local.epsilon = 0.0;
  check_config(local);
  const int p = sigma_eps.dim();
  if (i < 0 || i >= p) throw BadInput("column index out of range");
  const DenseMatrix& sig = sigma_eps.mat();
  Eigen::LLT<DenseMatrix> normal_llt(
      (sig * sig + DenseMatrix::Identity(p, p)).eval());
  if (normal_llt.info() != Eigen::Success) {
    throw SingularMatrix("could not factor the column-update system");
  }
  DenseMatrix beta(p, p);
  std::vector<double> residuals(static_cast<size_t>(p), 0.0);
  std::vector<int> iters(static_cast<size_t>(p), 0);
  solve_columns(sig, normal_llt, lambda1, local, {i}, nullptr, beta,
                residuals, iters);
  return ClimeColumnResult{beta.col(i), residuals[static_cast<size_t>(i)],
                           iters[static_cast<size_t>(i)]};
}

ClimeResult clime_estimate(const SymmetricMatrix& s, const ClimeConfig& cfg) {
  return estimate_impl(s, cfg, nullptr);
}

ClimeResult clime_estimate(const SymmetricMatrix& s, const ClimeConfig& cfg,
                           const DenseMatrix& warm_start) {
  return estimate_impl(s, cfg, &warm_start);
}

SymmetricMatrix clime_hard_threshold(const SymmetricMatrix& omega, double xi) {
  if (!(xi >= 0.0)) throw BadParam("xi must be nonnegative");
  DenseMatrix out = omega.mat();
  for (long j = 0; j < out.cols(); ++j) {
    for (long i = 0; i <= j; ++i) {
      if (std::fabs(out(i, j)) <= xi) out(i, j) = out(j, i) = 0.0;
    }
  }
  return SymmetricMatrix(out);
}

}  // namespace pddcov
