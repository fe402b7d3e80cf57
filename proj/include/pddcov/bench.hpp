#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pddcov/crossval.hpp"
#include "pddcov/linalg.hpp"

namespace pddcov {

struct EvalReport {
  double spectral_loss = 0.0;
  double frobenius_loss = 0.0;
  double max_loss = 0.0;
  std::optional<double> tpr;  // present only when the truth's off-diagonal
  std::optional<double> fpr;  // support is known and has true zeros
  std::optional<bool> sign_consistent;
};

// Loss norms of (estimate - truth); support metrics count unordered
// off-diagonal pairs, with "detected" meaning exactly nonzero. Sign
// consistency requires every nonzero truth entry (diagonal included) to be
// estimated with a nonzero of the same sign.
EvalReport evaluate(const SymmetricMatrix& estimate,
                    const SymmetricMatrix& truth,
                    bool off_diagonal_support_known);

enum class BenchMethod {
  sample,          // plain sample covariance
  hard,            // thresholded covariance, CV-selected tau
  soft,
  scad,
  adaptive_lasso,
  sample_inverse,  // inverse sample covariance baseline
  clime,
  spice,
};

std::string method_name(BenchMethod m);
BenchMethod parse_method(const std::string& name);

// methods 1/2 estimate the covariance, 3/4 the precision matrix
std::vector<BenchMethod> default_methods(int model);

struct BenchConfig {
  int model = 1;
  int p = 50;
  int n = 200;
  double alpha = 1.0;  // +inf = independent columns
  int replications = 20;
  std::vector<BenchMethod> methods;  // empty = defaults for the model
  int h1 = 10;
  int h2 = 10;
  TuningGrid grid;  // empty = default 20-point grid
  std::uint64_t seed = 0;
  int threads = 1;
  double cv_solver_tol = 1e-5;  // looser tolerance inside CV only
  int cv_max_iter = 100000;
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
};

struct MethodSummary {
  BenchMethod method = BenchMethod::sample;
  int successes = 0;  // replications contributing to the means
  int na_count = 0;   // singular-baseline replications reported as N/A
  MetricSummary spectral;
  MetricSummary frobenius;
  MetricSummary max_elem;
  std::optional<MetricSummary> tpr;
  std::optional<MetricSummary> fpr;
  std::optional<MetricSummary> sign_consistent;  // mean of 0/1 indicators
};

struct BenchResult {
  BenchConfig config;
  std::vector<MethodSummary> methods;
  std::vector<std::string> failures;  // "rep <i>: <error>" entries
};

// One full experiment cell: per replication, simulate a panel, tune each
// method by gap-block CV, estimate, and score against the model truth.
// Replications use disjoint RNG streams and aggregate by replication index
// (pairwise summation), so results do not depend on cfg.threads. Individual
// replication errors are recorded and skipped; a failure rate of 20% or more
// raises BenchAborted.
BenchResult run_benchmark(const BenchConfig& cfg);

// pairwise (cascade) summation over values[lo, hi)
double pairwise_sum(const std::vector<double>& values, size_t lo, size_t hi);

MetricSummary summarize(const std::vector<double>& values);

}  // namespace pddcov
