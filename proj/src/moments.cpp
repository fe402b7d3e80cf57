#include "pddcov/moments.hpp"

#include <cmath>
#include <string>

#include "pddcov/errors.hpp"

namespace pddcov {

TimeSeriesPanel::TimeSeriesPanel(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 2) {
    throw DegenerateInput("panel needs p >= 1 variables and n >= 2 time points");
  }
  require_finite(data_, "panel");
}

TimeSeriesPanel TimeSeriesPanel::select_columns(
    const std::vector<int>& cols) const {
  if (cols.size() < 2) {
    throw DegenerateInput("column selection needs at least 2 time points");
  }
  Eigen::MatrixXd sub(data_.rows(), static_cast<long>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) {
    const int c = cols[k];
    if (c < 0 || c >= n()) throw BadInput("column index out of range");
    sub.col(static_cast<long>(k)) = data_.col(c);
  }
  return TimeSeriesPanel(std::move(sub));
}

SymmetricMatrix sample_covariance(const TimeSeriesPanel& x) {
  const auto& d = x.data();
  const double n = static_cast<double>(x.n());
  const Eigen::VectorXd mean = d.rowwise().mean();
  const Eigen::MatrixXd centered = d.colwise() - mean;
  Eigen::MatrixXd cov = (centered * centered.transpose()) / n;
  return SymmetricMatrix::mirror_upper(cov);
}

SymmetricMatrix sample_correlation(const TimeSeriesPanel& x) {
  const SymmetricMatrix cov = sample_covariance(x);
  const int p = cov.dim();
  Eigen::VectorXd inv_sd(p);
  for (int i = 0; i < p; ++i) {
    const double v = cov(i, i);
    if (!(v > 0.0)) throw ZeroVariance(i);
    inv_sd(i) = 1.0 / std::sqrt(v);
  }
  Eigen::MatrixXd r = inv_sd.asDiagonal() * cov.mat() * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  return SymmetricMatrix::mirror_upper(r);
}

std::vector<double> sample_autocorrelation(const std::vector<double>& series,
                                           int max_lag) {
  const int n = static_cast<int>(series.size());
  if (max_lag < 1 || max_lag > n - 1) {
    throw BadLag("max_lag must lie in [1, n-1], got " + std::to_string(max_lag));
  }
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;

  std::vector<double> gamma(static_cast<size_t>(max_lag) + 1, 0.0);
  for (int t = 0; t <= max_lag; ++t) {
    double acc = 0.0;
    for (int k = 0; k + t < n; ++k) {
      acc += (series[k] - mean) * (series[k + t] - mean);
    }
    gamma[t] = acc / n;
  }
  if (!(gamma[0] > 0.0)) throw ZeroVariance(0);

  std::vector<double> rho(gamma.size());
  rho[0] = 1.0;
  for (int t = 1; t <= max_lag; ++t) rho[t] = gamma[t] / gamma[0];
  return rho;
}

}  // namespace pddcov
