#include "pddcov/crossval.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pddcov/errors.hpp"
#include "pddcov/parallel.hpp"
#include "pddcov/rng.hpp"

namespace pddcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid(const TuningGrid& grid) {
  if (grid.values.empty()) throw BadParam("tuning grid is empty");
  double prev = 0.0;
  for (double v : grid.values) {
    if (!(v > prev)) {
      throw BadParam("tuning grid must be strictly increasing and positive");
    }
    prev = v;
  }
}

void check_plan(const GapBlockPlan& plan, int n) {
  if (plan.n != n) throw DimMismatch("plan was built for a different n");
  if (plan.splits.empty()) throw BadParam("plan has no splits");
}

std::vector<int> range_columns(int lo, int hi) {
  std::vector<int> out;
  for (int c = lo; c < hi; ++c) out.push_back(c);
  return out;
}

// argmin over the curve; exact ties keep the smallest grid value
double pick_smallest_argmin(const std::vector<CurvePoint>& curve) {
  double best_loss = kInf;
  double best_value = curve.front().value;
  for (const CurvePoint& pt : curve) {
    if (pt.loss < best_loss) {
      best_loss = pt.loss;
      best_value = pt.value;
    }
  }
  return best_value;
}

// logdet for a symmetric matrix, or -inf when it is not PD
double logdet_if_pd(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m.mat(),
                                                Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) return -kInf;
  return ev.array().log().sum();
}

double likelihood_loss(const SymmetricMatrix& omega,
                       const SymmetricMatrix& sigma_valid) {
  const double ld = logdet_if_pd(omega);
  if (ld == -kInf) return kInf;
  return (omega.mat().cwiseProduct(sigma_valid.mat())).sum() - ld;
}

SelectResult reduce_curve(const TuningGrid& grid,
                          const std::vector<std::vector<double>>& loss) {
  const size_t splits = loss.size();
  SelectResult out;
  for (size_t j = 0; j < grid.values.size(); ++j) {
    double acc = 0.0;
    for (size_t i = 0; i < splits; ++i) acc += loss[i][j];
    out.curve.push_back({grid.values[j], acc / static_cast<double>(splits)});
  }
  out.selected = pick_smallest_argmin(out.curve);
  return out;
}

}  // namespace

GapBlockPlan make_plan(int n, int h1, int h2, std::uint64_t seed) {
  if (h1 < 4) throw TooSmall("need at least 4 contiguous blocks, got " +
                             std::to_string(h1));
  if (h2 < 0) throw BadParam("h2 must be nonnegative");
  if (n < 4 * h1) {
    throw TooSmall("need n >= 4*h1 so every training set is populated (n=" +
                   std::to_string(n) + ", h1=" + std::to_string(h1) + ")");
  }

  GapBlockPlan plan;
  plan.n = n;
  plan.h1 = h1;
  plan.h2 = h2;

  std::vector<int> bound(static_cast<size_t>(h1) + 1);
  for (int i = 0; i <= h1; ++i) {
    bound[static_cast<size_t>(i)] =
        static_cast<int>((static_cast<long>(i) * n) / h1);
  }
  for (int i = 0; i < h1; ++i) {
    CvSplit split;
    split.validation = range_columns(bound[static_cast<size_t>(i)],
                                     bound[static_cast<size_t>(i) + 1]);
    const int drop_lo = bound[static_cast<size_t>(std::max(0, i - 1))];
    const int drop_hi = bound[static_cast<size_t>(std::min(h1, i + 2))];
    for (int c = 0; c < n; ++c) {
      if (c < drop_lo || c >= drop_hi) split.training.push_back(c);
    }
    plan.splits.push_back(std::move(split));
  }

  const int blk = (n + h1 - 1) / h1;
  Rng rng(seed, 0x67617000ull);
  for (int b = 0; b < h2; ++b) {
    const int start =
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - blk) + 1));
    CvSplit split;
    split.validation = range_columns(start, start + blk);
    for (int c = 0; c < n; ++c) {
      if (c < start - blk || c >= start + 2 * blk) split.training.push_back(c);
    }
    plan.splits.push_back(std::move(split));
  }
  return plan;
}

TuningGrid log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo)) throw BadParam("grid needs 0 < lo < hi");
  if (count < 2) throw BadParam("grid needs at least 2 points");
  TuningGrid grid;
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    grid.values.push_back(lo * std::pow(hi / lo, t));
  }
  return grid;
}

TuningGrid default_grid() { return log_grid(0.01, 1.0, 20); }

SelectResult select_tau(const TimeSeriesPanel& x, const GapBlockPlan& plan,
                        const TuningGrid& grid, const ThresholdRule& rule,
                        CvTarget target, int threads) {
  check_grid(grid);
  check_plan(plan, x.n());
  const size_t nsplit = plan.splits.size();
  std::vector<std::vector<double>> loss(
      nsplit, std::vector<double>(grid.values.size(), 0.0));

  parallel_for(static_cast<int>(nsplit), threads, [&](int si) {
    const CvSplit& split = plan.splits[static_cast<size_t>(si)];
    const TimeSeriesPanel valid = x.select_columns(split.validation);
    const TimeSeriesPanel train = x.select_columns(split.training);
    const SymmetricMatrix ref = target == CvTarget::covariance
                                    ? sample_covariance(valid)
                                    : sample_correlation(valid);
    const SymmetricMatrix fit = target == CvTarget::covariance
                                    ? sample_covariance(train)
                                    : sample_correlation(train);
    for (size_t j = 0; j < grid.values.size(); ++j) {
      const double tau = grid.values[j];
      const SymmetricMatrix shrunk =
          target == CvTarget::covariance
              ? threshold_covariance(fit, tau, rule)
              : threshold_correlation(fit, tau, rule);
      loss[static_cast<size_t>(si)][j] =
          (shrunk.mat() - ref.mat()).squaredNorm();
    }
  });
  return reduce_curve(grid, loss);
}

SelectResult select_lambda_precision(const TimeSeriesPanel& x,
                                     const GapBlockPlan& plan,
                                     const TuningGrid& grid,
                                     const ClimeConfig& base,
                                     bool auto_epsilon, int threads) {
  check_grid(grid);
  check_plan(plan, x.n());
  const size_t nsplit = plan.splits.size();
  const size_t nv = grid.values.size();
  std::vector<std::vector<double>> loss(nsplit, std::vector<double>(nv, 0.0));

  parallel_for(static_cast<int>(nsplit), threads, [&](int si) {
    const CvSplit& split = plan.splits[static_cast<size_t>(si)];
    const SymmetricMatrix sigma_valid =
        sample_covariance(x.select_columns(split.validation));
    const TimeSeriesPanel train = x.select_columns(split.training);
    const SymmetricMatrix sigma_train = sample_covariance(train);
    ClimeConfig cfg = base;
    cfg.threads = 1;  // parallelism lives at the split level here
    if (auto_epsilon) cfg.epsilon = default_epsilon(train.n());

    DenseMatrix warm;
    for (size_t j = nv; j-- > 0;) {  // large to small: shrinking feasible sets
      cfg.lambda1 = grid.values[j];
      const ClimeResult fit =
          warm.size() == 0 ? clime_estimate(sigma_train, cfg)
                           : clime_estimate(sigma_train, cfg, warm);
      warm = fit.omega_star;
      loss[static_cast<size_t>(si)][j] =
          likelihood_loss(fit.omega, sigma_valid);
    }
  });
  return reduce_curve(grid, loss);
}

SelectResult select_lambda_precision(const TimeSeriesPanel& x,
                                     const GapBlockPlan& plan,
                                     const TuningGrid& grid,
                                     const SpiceConfig& base, int threads) {
  check_grid(grid);
  check_plan(plan, x.n());
  const size_t nsplit = plan.splits.size();
  const size_t nv = grid.values.size();
  std::vector<std::vector<double>> loss(nsplit, std::vector<double>(nv, 0.0));

  parallel_for(static_cast<int>(nsplit), threads, [&](int si) {
    const CvSplit& split = plan.splits[static_cast<size_t>(si)];
    const SymmetricMatrix sigma_valid =
        sample_covariance(x.select_columns(split.validation));
    const TimeSeriesPanel train = x.select_columns(split.training);
    const SymmetricMatrix sigma_train = sample_covariance(train);

    Eigen::VectorXd inv_sd(train.p());
    const DenseMatrix& s = sigma_train.mat();
    for (int i = 0; i < train.p(); ++i) {
      if (!(s(i, i) > 0.0)) throw ZeroVariance(i);
      inv_sd(i) = 1.0 / std::sqrt(s(i, i));
    }
    DenseMatrix r = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
    r = ((r + r.transpose()) / 2.0).eval();
    r.diagonal().setOnes();
    const SymmetricMatrix corr(r);

    SpiceConfig cfg = base;
    GlassoResult state{SymmetricMatrix(DenseMatrix::Identity(1, 1)), 0, 0.0,
                       DenseMatrix(), DenseMatrix()};
    bool have_state = false;
    for (size_t j = nv; j-- > 0;) {
      cfg.lambda2 = grid.values[j];
      GlassoResult fit = have_state ? glasso_corr(corr, cfg, state)
                                    : glasso_corr(corr, cfg);
      const DenseMatrix omega =
          inv_sd.asDiagonal() * fit.k.mat() * inv_sd.asDiagonal();
      loss[static_cast<size_t>(si)][j] = likelihood_loss(
          SymmetricMatrix((omega + omega.transpose()) / 2.0), sigma_valid);
      state = std::move(fit);
      have_state = true;
    }
  });
  return reduce_curve(grid, loss);
}

}  // namespace pddcov
