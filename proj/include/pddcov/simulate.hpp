#pragma once

#include <cstdint>
#include <vector>

#include "pddcov/linalg.hpp"
#include "pddcov/moments.hpp"

namespace pddcov {

// Nonnegative exponential-sum approximation of x^-alpha on [1, domain_n]:
//   hhat(x) = sum_i a_i exp(-b_i x),  a_i >= 0.
// The i.i.d. sentinel (alpha = +inf) carries no terms; samplers branch on it.
struct ExpSumFit {
  std::vector<double> a;
  std::vector<double> b;
  double alpha = 1.0;
  int domain_n = 2;
  double max_rel_err = 0.0;

  double eval(double x) const;
  static ExpSumFit iid_sentinel(int n);
  bool is_iid() const;
};

// Fixed geometric b-grid plus nonnegative least squares for the a_i, with
// rows weighted by 1/h(x) so the recorded error is relative. The grid spans
// [1/(10 n), 5]: slowly decaying targets (alpha well below 1) need modes
// flatter than 1/n to track the tail, and the accuracy requirement at
// alpha = 0.1 is unreachable on a grid floored at 1/n.
// Throws FitFailed when max_rel_err > tol; callers may raise n_terms.
ExpSumFit fit_exp_sum(double alpha, int n, int n_terms = 8, double tol = 0.05);

struct ModelSpec {
  int model = 1;  // 1..4
  int p = 3;
};

struct ModelMatrices {
  SymmetricMatrix sigma;
  SymmetricMatrix omega;
};

// Model 1: sigma_ij = 0.6^|i-j|            (precision = inverse)
// Model 2: sigma banded 1 / 0.6 / 0.3      (precision = inverse)
// Model 3: omega_ij = 0.6^|i-j|            (covariance = inverse)
// Model 4: omega banded 1 / 0.6 / 0.3      (covariance = inverse)
// Positive definiteness is checked even where it holds by construction.
ModelMatrices build_model(const ModelSpec& spec);

// AR(1)-mixture sampler: X_t = sum_i c_i Y_t^(i) with c_i = sqrt(a_i e^-b_i)
// rescaled so sum c_i^2 = 1 exactly (makes cov(X_t) = Sigma rather than
// hhat(1)*Sigma), Y_1 ~ N(0, Sigma), Y_t = rho_i Y_{t-1} + e_t with
// rho_i = e^-b_i and e_t ~ N(0, (1-rho_i^2) Sigma). Lag-j cross-correlations
// decay like (j+1)^-alpha. Deterministic given seed.
TimeSeriesPanel simulate_pdd(const ModelSpec& spec, const ExpSumFit& fit,
                             int n, std::uint64_t seed);

// Normalization factor 1/sum(c_i^2 before rescale) applied by simulate_pdd;
// recorded in run manifests.
double normalization_factor(const ExpSumFit& fit);

// Lag-shifted sample correlation table: entry (i,j) correlates series i at
// time t with series j at time t+lag; not symmetric for lag > 0.
DenseMatrix empirical_cross_correlation(const TimeSeriesPanel& x, int lag);

}  // namespace pddcov
