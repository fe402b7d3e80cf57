#include "pddcov/spice.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pddcov/errors.hpp"

namespace pddcov {

namespace {

void check_config(const SpiceConfig& cfg) {
  if (!(cfg.lambda2 > 0.0)) throw BadParam("lambda2 must be positive");
  if (!(cfg.tol > 0.0)) throw BadParam("tol must be positive");
  if (cfg.max_iter < 1) throw BadParam("max_iter must be positive");
}

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// Primal objective tr(KR) - logdet K + lam|K|_1,off minus the dual value
// logdet W + p. Every complete sweep rewrites each off-diagonal entry of W
// to satisfy |W - R|_off <= lam (lasso stationarity), so W is dual feasible
// and the difference certifies K's suboptimality. Returns +inf while either
// matrix is not positive definite.
double duality_gap(const DenseMatrix& k, const DenseMatrix& w,
                   const DenseMatrix& rm, double lam) {
  const Eigen::LLT<DenseMatrix> kf(k);
  const Eigen::LLT<DenseMatrix> wf(w);
  if (kf.info() != Eigen::Success || wf.info() != Eigen::Success) {
    return std::numeric_limits<double>::infinity();
  }
  const auto logdet = [](const Eigen::LLT<DenseMatrix>& f) {
    return 2.0 * f.matrixLLT().diagonal().array().log().sum();
  };
  const double l1_off = k.cwiseAbs().sum() - k.diagonal().cwiseAbs().sum();
  return k.cwiseProduct(rm).sum() - logdet(kf) + lam * l1_off - logdet(wf) -
         static_cast<double>(k.rows());
}

// K as implied by the dual state (w, b); column j has b(j,j) == 0, so full
// dots already skip the pivot entry.
DenseMatrix reconstruct_k(const DenseMatrix& w, const DenseMatrix& b) {
  const long p = w.rows();
  DenseMatrix k(p, p);
  for (long j = 0; j < p; ++j) {
    const double den = w(j, j) - w.col(j).dot(b.col(j));
    if (!(den > 0.0)) {
      throw SingularMatrix("dual iterate lost positive definiteness");
    }
    k.col(j) = -b.col(j) / den;
    k(j, j) = 1.0 / den;
  }
  return (k + k.transpose()) / 2.0;
}

GlassoResult glasso_impl(const SymmetricMatrix& r, const SpiceConfig& cfg,
                         const GlassoResult* warm) {
  check_config(cfg);
  const long p = r.dim();
  const DenseMatrix& rm = r.mat();
  for (long i = 0; i < p; ++i) {
    if (std::fabs(rm(i, i) - 1.0) > 1e-9) {
      throw BadInput("correlation input needs a unit diagonal");
    }
  }
  const double lam = cfg.lambda2;

  DenseMatrix w = rm;
  DenseMatrix b = DenseMatrix::Zero(p, p);
  if (warm != nullptr) {
    if (warm->w.rows() != p || warm->b.rows() != p) {
      throw DimMismatch("warm start must match the input dimension");
    }
    w = warm->w;
    b = warm->b;
  }

  int sweeps = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (; sweeps < cfg.max_iter; ) {
    for (long j = 0; j < p; ++j) {
      auto beta = b.col(j);
      // lasso on the remaining block: coordinate descent with b(j,j)
      // pinned at zero so whole-row dots need no index juggling
      for (int pass = 0; pass < 200; ++pass) {
        double delta = 0.0;
        for (long k = 0; k < p; ++k) {
          if (k == j) continue;
          const double resid =
              rm(k, j) - w.row(k).dot(beta) + w(k, k) * beta(k);
          const double next = soft(resid, lam) / w(k, k);
          delta = std::max(delta, std::fabs(next - beta(k)));
          beta(k) = next;
        }
        if (delta < 1e-8) break;
      }
      const Eigen::VectorXd wcol = w * beta;
      for (long k = 0; k < p; ++k) {
        if (k == j) continue;
        w(k, j) = w(j, k) = wcol(k);
      }
      w(j, j) = rm(j, j);
    }
    ++sweeps;

    const DenseMatrix k = reconstruct_k(w, b);
    gap = duality_gap(k, w, rm, lam);
    if (gap < cfg.tol) {
      return GlassoResult{SymmetricMatrix(k), sweeps, gap, std::move(w),
                          std::move(b)};
    }
  }
  throw NotConverged("duality gap still " + std::to_string(gap) + " after " +
                         std::to_string(sweeps) + " sweeps",
                     sweeps, gap);
}

}  // namespace

GlassoResult glasso_corr(const SymmetricMatrix& r, const SpiceConfig& cfg) {
  return glasso_impl(r, cfg, nullptr);
}

GlassoResult glasso_corr(const SymmetricMatrix& r, const SpiceConfig& cfg,
                         const GlassoResult& warm) {
  return glasso_impl(r, cfg, &warm);
}

SpiceResult spice_estimate(const SymmetricMatrix& sigma_hat,
                           const SpiceConfig& cfg) {
  check_config(cfg);
  const long p = sigma_hat.dim();
  const DenseMatrix& s = sigma_hat.mat();
  Eigen::VectorXd inv_sd(p);
  for (long i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0)) throw ZeroVariance(static_cast<int>(i));
    inv_sd(i) = 1.0 / std::sqrt(s(i, i));
  }
  const DenseMatrix r_raw = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  DenseMatrix r = (r_raw + r_raw.transpose()) / 2.0;
  r.diagonal().setOnes();

  GlassoResult fit = glasso_corr(SymmetricMatrix(r), cfg);
  const DenseMatrix omega =
      inv_sd.asDiagonal() * fit.k.mat() * inv_sd.asDiagonal();
  return SpiceResult{SymmetricMatrix((omega + omega.transpose()) / 2.0),
                     std::move(fit.k), fit.sweeps, fit.duality_gap};
}

SymmetricMatrix partial_correlations(const SymmetricMatrix& omega) {
  const long p = omega.dim();
  const DenseMatrix& m = omega.mat();
  Eigen::VectorXd inv_sd(p);
  for (long i = 0; i < p; ++i) {
    if (!(m(i, i) > 0.0)) {
      throw BadDiagonal("precision diagonal must be positive at index " +
                        std::to_string(i));
    }
    inv_sd(i) = 1.0 / std::sqrt(m(i, i));
  }
  DenseMatrix out = -(inv_sd.asDiagonal() * m * inv_sd.asDiagonal());
  out = (out + out.transpose()) / 2.0;
  out.diagonal().setOnes();
  return SymmetricMatrix(out);
}

}  // namespace pddcov
