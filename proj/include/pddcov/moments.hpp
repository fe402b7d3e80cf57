#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pddcov/linalg.hpp"

namespace pddcov {

// Time-series panel: p variables observed at n time points, column t is the
// observation X_t. The mean is always estimated, never assumed known.
class TimeSeriesPanel {
 public:
  explicit TimeSeriesPanel(Eigen::MatrixXd data);

  int p() const { return static_cast<int>(data_.rows()); }
  int n() const { return static_cast<int>(data_.cols()); }
  const Eigen::MatrixXd& data() const { return data_; }

  // Panel restricted to the given time columns (cross-validation splits).
  TimeSeriesPanel select_columns(const std::vector<int>& cols) const;

 private:
  Eigen::MatrixXd data_;
};

// Sample covariance with divisor n (not n-1):
//   (1/n) sum_t X_t X_t' - Xbar Xbar'
// computed in the algebraically identical mean-centered form for stability.
SymmetricMatrix sample_covariance(const TimeSeriesPanel& x);

// rho_ij = sigma_ij / sqrt(sigma_ii sigma_jj); unit diagonal exactly.
// Throws ZeroVariance(i) when a series is constant.
SymmetricMatrix sample_correlation(const TimeSeriesPanel& x);

// Autocorrelations rho(0..max_lag) with the lag-t autocovariance
//   (1/n) sum_{k=1}^{n-t} (x_k - xbar)(x_{k+t} - xbar)
// (divisor n at every lag, the biased stabilizing form).
std::vector<double> sample_autocorrelation(const std::vector<double>& series,
                                           int max_lag);

}  // namespace pddcov
