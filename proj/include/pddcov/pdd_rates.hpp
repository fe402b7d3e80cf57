#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "pddcov/linalg.hpp"
#include "pddcov/moments.hpp"

namespace pddcov {

// Decay exponent sentinel for the i.i.d. case. Everywhere alpha appears,
// +infinity selects the independent-observations branch.
inline constexpr double kAlphaIid = std::numeric_limits<double>::infinity();

inline bool is_iid_alpha(double alpha) {
  return alpha == std::numeric_limits<double>::infinity();
}

// Dependence class parameters: cross-correlations bounded by c0 * |i-j|^-alpha.
struct PddSpec {
  double alpha = 1.0;
  double c0 = 1.0;
};

struct RateInput {
  int n = 2;
  int p = 2;
  double alpha = 1.0;  // kAlphaIid for i.i.d.
  double m_p = 1.0;    // l1 bound on the precision matrix, lambda_prime only
};

// Threshold-level rate expression (the constant M is not modeled):
//   0<a<1 : n^{-a/3} (log p)^{-1/6} [log p + (1-2a/3) log n]^{1/2}
//   a=1   : n^{-1/3} (log p)^{-1/6} (log p + log(n)/3)^{1/2} (log n)^{1/3}
//   a>1   : n^{-a/(1+2a)} (log p)^{-1/(2(1+2a))} (log p + log(n)/(1+2a))^{1/2}
//   iid   : sqrt(log p / n)
double tau_prime(const RateInput& inp);

// Constraint-level rate for the l1-constrained precision estimator; weighted
// by m_p and reduces to tau_prime exactly at m_p = 1. The iid branch is
// sqrt(log p / n) for any m_p.
double lambda_prime(const RateInput& inp);

// Block size from the explicit asymptotic expression, rounded to the nearest
// integer and clamped below at 1; values exceeding n throw OutOfRange. With
// for_clime the expression gains the m_p^{4/3} (alpha <= 1) or m_p^{4/(1+2a)}
// (alpha > 1) factor. The iid branch returns 1.
long block_size_f(const RateInput& inp, bool for_clime);

// Dependence budget dominating 2*c0*sum_{k>=1} (k f)^-alpha truncated at n/f:
//   alpha != 1: 2 c0 f^-alpha [(n/f)^{1-alpha} - alpha] / (1 - alpha)
//   alpha == 1: 2 c0 f^-1 [1 + log(n/f)]
// The iid sentinel returns 0 (no dependence).
double g_bound(long n, long f, const PddSpec& spec);

struct AlphaFit {
  double alpha_hat = 0.0;
  double c_hat = 0.0;
};

enum class AlphaFitMode {
  per_series,  // pool every series' (log t, log|rho_i(t)|) points into one OLS
  envelope     // fit the per-lag max over series of |rho_i(t)|
};

// Least squares of log|rho(t)| on log t over t = 1..max_lag; lags with
// |rho(t)| < 1e-8 are dropped; fewer than 3 usable lags is an error.
// Returns alpha_hat = -slope and c_hat = exp(intercept).
AlphaFit estimate_alpha(const TimeSeriesPanel& x, int max_lag,
                        AlphaFitMode mode);

struct IrrepReport {
  double beta = 0.0;         // 1 - max_{e in S^c} |Gamma_{eS} Gamma_SS^-1|_1
  double kappa_R = 0.0;      // ||R||_1
  double kappa_Gamma = 0.0;  // ||Gamma_SS^-1||_1
  int d = 0;                 // max nonzeros per row of Omega
};

// Support-recovery diagnostics with Gamma = R (x) R. beta <= 0 means the
// irrepresentability condition fails. Empty S^c gives beta = 1 by convention.
// p is capped at 50 because Gamma is p^2 x p^2.
IrrepReport irrepresentability(
    const SymmetricMatrix& r,
    const std::vector<std::pair<int, int>>& omega_support);

}  // namespace pddcov
