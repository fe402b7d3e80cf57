#pragma once

#include "pddcov/linalg.hpp"

namespace pddcov {

struct SpiceConfig {
  double lambda2 = 0.1;  // off-diagonal penalty, > 0
  double tol = 1e-6;     // duality-gap stopping threshold
  int max_iter = 500;    // full coordinate-descent sweeps
};

struct GlassoResult {
  SymmetricMatrix k;
  int sweeps = 0;
  double duality_gap = 0.0;
  DenseMatrix w;  // dual iterate; with b, a warm start for a nearby lambda2
  DenseMatrix b;
};

// Penalized inverse-correlation fit
//   min_K  tr(K R) - logdet K + lambda2 * sum_{i != j} |K_ij|
// via blockwise coordinate descent on the dual, stopping when the duality
// gap between this primal objective and the dual logdet W + p falls below
// tol (the dual iterate W stays feasible, so the gap certifies optimality).
// R must have a unit diagonal; a singular R is fine since the penalty
// bounds the minimizer.
GlassoResult glasso_corr(const SymmetricMatrix& r, const SpiceConfig& cfg);
GlassoResult glasso_corr(const SymmetricMatrix& r, const SpiceConfig& cfg,
                         const GlassoResult& warm);

struct SpiceResult {
  SymmetricMatrix omega;
  SymmetricMatrix k;
  int sweeps = 0;
  double duality_gap = 0.0;
};

// Correlation-standardized precision estimate: with W = diag(sqrt(S_ii)),
// fits K on R = W^-1 S W^-1 and returns W^-1 K W^-1 (same zero pattern as K).
SpiceResult spice_estimate(const SymmetricMatrix& sigma_hat,
                           const SpiceConfig& cfg);

// Entry (i,j) -> -omega_ij / sqrt(omega_ii * omega_jj), diagonal set to 1.
SymmetricMatrix partial_correlations(const SymmetricMatrix& omega);

}  // namespace pddcov
