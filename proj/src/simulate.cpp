#include "pddcov/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pddcov/errors.hpp"
#include "pddcov/rng.hpp"

namespace pddcov {

namespace {

// Lawson-Hanson active-set nonnegative least squares. Problem sizes here are
// tiny (a few hundred rows, tens of columns), so the dense QR subproblems are
// the simplest reliable choice.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const long m = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(static_cast<size_t>(m), false);
  const double wtol = 1e-11 * a.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff();

  for (int outer = 0; outer < 3 * m + 30; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (y - a * x);
    long best = -1;
    double best_w = wtol;
    for (long i = 0; i < m; ++i) {
      if (!passive[static_cast<size_t>(i)] && w(i) > best_w) {
        best = i;
        best_w = w(i);
      }
    }
    if (best < 0) break;
    passive[static_cast<size_t>(best)] = true;

    for (;;) {
      std::vector<long> pidx;
      for (long i = 0; i < m; ++i) {
        if (passive[static_cast<size_t>(i)]) pidx.push_back(i);
      }
      Eigen::MatrixXd ap(a.rows(), static_cast<long>(pidx.size()));
      for (size_t k = 0; k < pidx.size(); ++k) ap.col(static_cast<long>(k)) = a.col(pidx[k]);
      const Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(y);

      bool all_positive = true;
      for (long k = 0; k < zp.size(); ++k) {
        if (zp(k) <= 0.0) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        x.setZero();
        for (size_t k = 0; k < pidx.size(); ++k) x(pidx[k]) = zp(static_cast<long>(k));
        break;
      }
      // step back to the boundary and drop the blocking variables
      double step = 1.0;
      for (size_t k = 0; k < pidx.size(); ++k) {
        const double z = zp(static_cast<long>(k));
        if (z <= 0.0) {
          const double xi = x(pidx[k]);
          step = std::min(step, xi / (xi - z));
        }
      }
      for (size_t k = 0; k < pidx.size(); ++k) {
        x(pidx[k]) += step * (zp(static_cast<long>(k)) - x(pidx[k]));
        if (x(pidx[k]) <= 1e-14) {
          x(pidx[k]) = 0.0;
          passive[static_cast<size_t>(pidx[k])] = false;
        }
      }
    }
  }
  return x;
}

Eigen::LLT<Eigen::MatrixXd> cholesky_of(const SymmetricMatrix& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("model covariance is not positive definite");
  }
  return llt;
}

}  // namespace

double ExpSumFit::eval(double x) const {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * std::exp(-b[i] * x);
  return acc;
}

ExpSumFit ExpSumFit::iid_sentinel(int n) {
  ExpSumFit f;
  f.alpha = std::numeric_limits<double>::infinity();
  f.domain_n = n;
  return f;
}

bool ExpSumFit::is_iid() const { return std::isinf(alpha); }

ExpSumFit fit_exp_sum(double alpha, int n, int n_terms, double tol) {
  if (!(alpha > 0.0) || std::isinf(alpha)) {
    throw BadInput("fit_exp_sum needs finite alpha > 0 (use the i.i.d. "
                   "sentinel for independent data)");
  }
  if (n < 2) throw BadInput("fit domain needs n >= 2");
  if (n_terms < 2) throw BadInput("need at least 2 exponential terms");

  // geometric b-grid and log-spaced fitting abscissae
  Eigen::VectorXd b(n_terms);
  const double b_lo = 0.1 / n;
  const double b_hi = 5.0;
  for (int i = 0; i < n_terms; ++i) {
    const double t = n_terms == 1 ? 0.0 : static_cast<double>(i) / (n_terms - 1);
    b(i) = b_lo * std::pow(b_hi / b_lo, t);
  }
  const int grid = 200;
  Eigen::MatrixXd design(grid, n_terms);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(grid);
  for (int g = 0; g < grid; ++g) {
    const double t = static_cast<double>(g) / (grid - 1);
    const double x = std::pow(static_cast<double>(n), t);  // log-spaced on [1,n]
    const double h = std::pow(x, -alpha);
    for (int i = 0; i < n_terms; ++i) {
      design(g, i) = std::exp(-b(i) * x) / h;  // rows scaled by 1/h: relative fit
    }
  }
  const Eigen::VectorXd coef = nnls(design, rhs);

  ExpSumFit fit;
  fit.alpha = alpha;
  fit.domain_n = n;
  for (int i = 0; i < n_terms; ++i) {
    if (coef(i) > 0.0) {
      fit.a.push_back(coef(i));
      fit.b.push_back(b(i));
    }
  }

  // relative error over a dense sweep of [1, n]
  const int sweep = std::max(n, 2001);
  double worst = 0.0;
  for (int g = 0; g <= sweep; ++g) {
    const double x = 1.0 + (static_cast<double>(n) - 1.0) * g / sweep;
    const double h = std::pow(x, -alpha);
    worst = std::max(worst, std::fabs(fit.eval(x) - h) / h);
  }
  fit.max_rel_err = worst;
  if (worst > tol) {
    throw FitFailed("exponential-sum fit reached relative error " +
                        std::to_string(worst) + " > tol " + std::to_string(tol) +
                        " (raise n_terms)",
                    worst);
  }
  return fit;
}

ModelMatrices build_model(const ModelSpec& spec) {
  const int p = spec.p;
  if (p < 1) throw BadInput("model dimension must be positive");
  if ((spec.model == 2 || spec.model == 4) && p < 3) {
    throw BadInput("banded models need p >= 3");
  }

  Eigen::MatrixXd base(p, p);
  switch (spec.model) {
    case 1:
    case 3:
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) base(i, j) = std::pow(0.6, std::abs(i - j));
      }
      break;
    case 2:
    case 4:
      base.setIdentity();
      for (int i = 0; i + 1 < p; ++i) base(i, i + 1) = base(i + 1, i) = 0.6;
      for (int i = 0; i + 2 < p; ++i) base(i, i + 2) = base(i + 2, i) = 0.3;
      break;
    default:
      throw BadInput("model must be 1, 2, 3 or 4");
  }

  const SymmetricMatrix defined(base);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(base, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPositiveDefinite("model matrix is not positive definite");
  }
  const SymmetricMatrix inverted = inverse(defined);
  if (spec.model <= 2) return ModelMatrices{defined, inverted};
  return ModelMatrices{inverted, defined};
}

double normalization_factor(const ExpSumFit& fit) {
  if (fit.is_iid()) return 1.0;
  double c2 = 0.0;
  for (size_t i = 0; i < fit.a.size(); ++i) c2 += fit.a[i] * std::exp(-fit.b[i]);
  if (!(c2 > 0.0)) throw BadInput("exponential-sum fit has no positive mass");
  return 1.0 / c2;
}

TimeSeriesPanel simulate_pdd(const ModelSpec& spec, const ExpSumFit& fit,
                             int n, std::uint64_t seed) {
  if (n < 2) throw BadInput("panel length must be >= 2");
  const ModelMatrices mm = build_model(spec);
  const int p = spec.p;
  const Eigen::MatrixXd l = cholesky_of(mm.sigma).matrixL();
  Rng rng(seed, 0x70616e656cull);  // fixed stream tag for panel generation

  Eigen::MatrixXd panel(p, n);
  Eigen::VectorXd z(p);
  auto draw = [&]() {
    for (int i = 0; i < p; ++i) z(i) = rng.next_gaussian();
  };

  if (fit.is_iid()) {
    for (int t = 0; t < n; ++t) {
      draw();
      panel.col(t) = l * z;
    }
    return TimeSeriesPanel(std::move(panel));
  }

  const int k = static_cast<int>(fit.a.size());
  if (k == 0) throw BadInput("exponential-sum fit has no terms");
  Eigen::VectorXd c(k), rho(k);
  double c2 = 0.0;
  for (int i = 0; i < k; ++i) {
    c(i) = fit.a[static_cast<size_t>(i)] *
           std::exp(-fit.b[static_cast<size_t>(i)]);
    rho(i) = std::exp(-fit.b[static_cast<size_t>(i)]);
    c2 += c(i);
  }
  c = (c / c2).cwiseSqrt();  // sum of squares is exactly 1 after rescale

  Eigen::MatrixXd y(p, k);
  for (int i = 0; i < k; ++i) {
    draw();
    y.col(i) = l * z;  // stationary start: Y_1 ~ N(0, Sigma)
  }
  panel.col(0) = y * c;
  for (int t = 1; t < n; ++t) {
    for (int i = 0; i < k; ++i) {
      draw();
      y.col(i) = rho(i) * y.col(i) +
                 std::sqrt(1.0 - rho(i) * rho(i)) * (l * z);
    }
    panel.col(t) = y * c;
  }
  return TimeSeriesPanel(std::move(panel));
}

DenseMatrix empirical_cross_correlation(const TimeSeriesPanel& x, int lag) {
  const int n = x.n();
  const int p = x.p();
  if (lag < 0 || lag > n - 2) {
    throw BadLag("lag must lie in [0, n-2], got " + std::to_string(lag));
  }
  const Eigen::VectorXd mean = x.data().rowwise().mean();
  const Eigen::MatrixXd centered = x.data().colwise() - mean;
  const Eigen::VectorXd var = centered.rowwise().squaredNorm() / n;
  for (int i = 0; i < p; ++i) {
    if (!(var(i) > 0.0)) throw ZeroVariance(i);
  }

  const long m = n - lag;
  const Eigen::MatrixXd lead = centered.leftCols(m);
  const Eigen::MatrixXd lagged = centered.rightCols(m);
  DenseMatrix out = (lead * lagged.transpose()) / n;
  const Eigen::VectorXd inv_sd = var.cwiseSqrt().cwiseInverse();
  out = inv_sd.asDiagonal() * out * inv_sd.asDiagonal();
  return out;
}

}  // namespace pddcov
