#include "pddcov/threshold.hpp"

#include <cmath>
#include <string>

#include "pddcov/errors.hpp"

namespace pddcov {

namespace {

void validate(const ThresholdRule& rule) {
  if (rule.kind == ThresholdKind::scad && !(rule.scad_a > 2.0)) {
    throw BadParam("SCAD parameter a must be > 2, got " +
                   std::to_string(rule.scad_a));
  }
  if (rule.kind == ThresholdKind::adaptive_lasso && !(rule.al_eta >= 1.0)) {
    throw BadParam("adaptive-lasso eta must be >= 1, got " +
                   std::to_string(rule.al_eta));
  }
}

}  // namespace

double threshold_value(double z, double tau, const ThresholdRule& rule) {
  if (!(tau >= 0.0)) throw BadParam("tau must be >= 0");
  validate(rule);
  const double az = std::fabs(z);
  switch (rule.kind) {
    case ThresholdKind::hard:
      return az > tau ? z : 0.0;
    case ThresholdKind::soft:
      return az > tau ? std::copysign(az - tau, z) : 0.0;
    case ThresholdKind::scad: {
      const double a = rule.scad_a;
      if (az <= 2.0 * tau) {
        return az > tau ? std::copysign(az - tau, z) : 0.0;
      }
      if (az <= a * tau) {
        return ((a - 1.0) * z - std::copysign(a * tau, z)) / (a - 2.0);
      }
      return z;
    }
    case ThresholdKind::adaptive_lasso: {
      if (az <= tau) return 0.0;
      const double shrink = std::pow(tau, rule.al_eta + 1.0) *
                            std::pow(az, -rule.al_eta);
      const double mag = az - shrink;
      return mag > 0.0 ? std::copysign(mag, z) : 0.0;
    }
  }
  throw BadParam("unknown threshold kind");
}

SymmetricMatrix threshold_covariance(const SymmetricMatrix& s, double tau,
                                     const ThresholdRule& rule) {
  const int p = s.dim();
  Eigen::MatrixXd out(p, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i <= j; ++i) {
      out(i, j) = threshold_value(s(i, j), tau, rule);
    }
  }
  return SymmetricMatrix::mirror_upper(out);
}

SymmetricMatrix threshold_correlation(const SymmetricMatrix& r, double tau,
                                      const ThresholdRule& rule) {
  const int p = r.dim();
  for (int i = 0; i < p; ++i) {
    if (std::fabs(r(i, i) - 1.0) > 1e-12) {
      throw BadInput("correlation input must have unit diagonal");
    }
  }
  Eigen::MatrixXd out(p, p);
  for (int j = 0; j < p; ++j) {
    out(j, j) = 1.0;
    for (int i = 0; i < j; ++i) {
      out(i, j) = threshold_value(r(i, j), tau, rule);
    }
  }
  return SymmetricMatrix::mirror_upper(out);
}

}  // namespace pddcov
