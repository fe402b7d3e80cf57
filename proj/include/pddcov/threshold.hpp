#pragma once

#include "pddcov/linalg.hpp"

namespace pddcov {

enum class ThresholdKind { hard, soft, scad, adaptive_lasso };

// Generalized thresholding rule. Every rule satisfies, for all z, tau >= 0:
//   (i) |s_tau(z)| <= |z|, (ii) s_tau(z) = 0 when |z| <= tau,
//   (iii) |s_tau(z) - z| <= tau.
struct ThresholdRule {
  ThresholdKind kind = ThresholdKind::hard;
  double scad_a = 3.7;  // SCAD shape, must be > 2
  double al_eta = 1.0;  // adaptive-lasso exponent, must be >= 1
};

// hard: z * 1(|z| > tau)
// soft: sign(z) (|z| - tau)_+
// scad: soft for |z| <= 2 tau, blended for 2 tau < |z| <= a tau, identity after
// adaptive lasso: sign(z) (|z| - tau^{eta+1} |z|^{-eta})_+
double threshold_value(double z, double tau, const ThresholdRule& rule);

// Entrywise thresholding of a covariance matrix, diagonal included (the
// estimator is defined entrywise with no exemption).
SymmetricMatrix threshold_covariance(const SymmetricMatrix& s, double tau,
                                     const ThresholdRule& rule);

// Correlation version: off-diagonals thresholded, diagonal pinned to exactly
// 1. Requires a unit diagonal on input (within 1e-12).
SymmetricMatrix threshold_correlation(const SymmetricMatrix& r, double tau,
                                      const ThresholdRule& rule);

}  // namespace pddcov
