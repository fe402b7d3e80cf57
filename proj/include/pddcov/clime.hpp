#pragma once

#include <optional>
#include <vector>

#include "pddcov/linalg.hpp"

namespace pddcov {

struct ClimeConfig {
  double lambda1 = 0.1;              // constraint level, > 0
  double epsilon = 0.0;              // diagonal perturbation, >= 0
  std::optional<double> xi;          // post-hoc hard threshold, off by default
  double solver_tol = 1e-7;          // in (0, 1e-3]
  int max_iter = 10000;
  int threads = 1;                   // 0 = all hardware threads
};

// sqrt(n) rule for the diagonal perturbation
double default_epsilon(int n);

SymmetricMatrix perturb(const SymmetricMatrix& s, double epsilon);

struct ClimeColumnResult {
  Eigen::VectorXd beta;
  double residual = 0.0;  // |Sigma_eps * beta - e_i|_inf
  int iterations = 0;
};

// One column of the constrained l1 program:
//   min |beta|_1  s.t.  |Sigma_eps * beta - e_i|_inf <= lambda1.
// cfg supplies tolerances; cfg.lambda1 and cfg.epsilon are ignored here
// (the matrix arrives already perturbed).
ClimeColumnResult clime_column(const SymmetricMatrix& sigma_eps, int i,
                               double lambda1, const ClimeConfig& cfg);

struct ClimeResult {
  SymmetricMatrix omega;             // symmetrized estimate
  DenseMatrix omega_star;            // raw column solutions, column i = beta_i;
                                     // reusable as a warm start at a nearby lambda1
  double max_residual = 0.0;
  std::vector<int> iterations_per_column;
};

// Full estimator: perturb, solve the p columns, then symmetrize by keeping
// the entry of smaller magnitude (ties keep the (i,j) entry, i < j). Columns
// are solved in fixed-size batches so results do not depend on cfg.threads.
ClimeResult clime_estimate(const SymmetricMatrix& s, const ClimeConfig& cfg);
ClimeResult clime_estimate(const SymmetricMatrix& s, const ClimeConfig& cfg,
                           const DenseMatrix& warm_start);

// Entrywise hard threshold: keep entries with |w| > xi (strict).
SymmetricMatrix clime_hard_threshold(const SymmetricMatrix& omega, double xi);

}  // namespace pddcov
