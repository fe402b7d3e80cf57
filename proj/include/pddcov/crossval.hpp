#pragma once

#include <cstdint>
#include <vector>

#include "pddcov/clime.hpp"
#include "pddcov/moments.hpp"
#include "pddcov/spice.hpp"
#include "pddcov/threshold.hpp"

namespace pddcov {

struct CvSplit {
  std::vector<int> validation;
  std::vector<int> training;
};

// Gap-block design: h1 contiguous blocks covering all columns (each split
// trains away from its block and the adjacent blocks), plus h2 random blocks
// of ceil(n/h1) columns with a one-block exclusion zone on each side, so
// training and validation columns are separated by at least a block.
struct GapBlockPlan {
  int n = 0;
  int h1 = 0;
  int h2 = 0;
  std::vector<CvSplit> splits;
};

GapBlockPlan make_plan(int n, int h1, int h2, std::uint64_t seed);

struct TuningGrid {
  std::vector<double> values;  // strictly increasing, positive
};

// count log-spaced values on [lo, hi]
TuningGrid log_grid(double lo, double hi, int count);
TuningGrid default_grid();  // 20 points on [0.01, 1]

struct CurvePoint {
  double value = 0.0;
  double loss = 0.0;
};

struct SelectResult {
  double selected = 0.0;
  std::vector<CurvePoint> curve;
};

enum class CvTarget { covariance, correlation };

// Picks the grid value minimizing the split-averaged squared Frobenius
// distance between the thresholded training-moment estimate and the raw
// validation-moment estimate. Ties go to the smallest value.
SelectResult select_tau(const TimeSeriesPanel& x, const GapBlockPlan& plan,
                        const TuningGrid& grid, const ThresholdRule& rule,
                        CvTarget target, int threads = 1);

// Precision-matrix selection with the validation loss
//   tr(Omega_train * Sigma_valid) - logdet(Omega_train).
// A training estimate without positive-definite structure contributes +inf
// loss for that (split, value) pair instead of aborting the search. Within a
// split the grid is walked from the largest value down, warm-starting each
// solve from the previous one. auto_epsilon replaces base.epsilon with
// 1/sqrt(training columns) per split.
SelectResult select_lambda_precision(const TimeSeriesPanel& x,
                                     const GapBlockPlan& plan,
                                     const TuningGrid& grid,
                                     const ClimeConfig& base,
                                     bool auto_epsilon, int threads = 1);
SelectResult select_lambda_precision(const TimeSeriesPanel& x,
                                     const GapBlockPlan& plan,
                                     const TuningGrid& grid,
                                     const SpiceConfig& base, int threads = 1);

}  // namespace pddcov
