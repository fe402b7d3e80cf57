#pragma once

// Independent reference implementations the tests compare against. These
// deliberately use different algorithms from the library (power iteration vs
// eigensolver, textbook simplex vs ADMM, raw moment formula vs centered
// update) so agreement is evidence, not tautology.

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace oracle {

// spectral norm by power iteration on M^T M (deterministic start vector)
double spectral_norm(const Eigen::MatrixXd& m);

// Kronecker product by quadruple loop
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// sample covariance using the raw formula (1/n) sum x x^T - xbar xbar^T
Eigen::MatrixXd sample_cov_raw(const Eigen::MatrixXd& panel);

// Dense two-phase simplex with Bland's rule for
//   min c^T x  s.t.  A x <= b, x >= 0.
// Returns nullopt when infeasible or unbounded.
struct LpSolution {
  double objective = 0.0;
  Eigen::VectorXd x;
};
std::optional<LpSolution> simplex(const Eigen::MatrixXd& a,
                                  const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& c);

// |beta|_1 minimization under |sigma beta - e_i|_inf <= lambda, via the LP
// reformulation with split variables.
std::optional<LpSolution> clime_column_lp(const Eigen::MatrixXd& sigma, int i,
                                          double lambda);

// 2x2 penalized inverse-correlation objective minimized by proximal gradient
// over (k11=k22, k12); valid for unit-diagonal R with |r12| < 1.
Eigen::Matrix2d glasso2x2(double r12, double lambda);

// exact truncated lattice sum 2 c0 sum_{k=1}^{floor(n/f)} (k f)^-alpha
double lattice_sum(long n, long f, double alpha, double c0);

// streaming (Welford) mean and n-1 standard deviation
struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
MeanSd welford(const std::vector<double>& values);

// off-diagonal support counts by explicit enumeration
struct SupportCounts {
  int true_nonzero = 0;
  int true_zero = 0;
  int detected = 0;
  int false_detected = 0;
};
SupportCounts count_support(const Eigen::MatrixXd& estimate,
                            const Eigen::MatrixXd& truth);

}  // namespace oracle
