#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pddcov/errors.hpp"
#include "pddcov/moments.hpp"
#include "pddcov/rng.hpp"

using pddcov::SymmetricMatrix;
using pddcov::TimeSeriesPanel;

namespace {

Eigen::MatrixXd gaussian_panel(int p, int n, std::uint64_t seed) {
  pddcov::Rng rng(seed, 1);
  Eigen::MatrixXd x(p, n);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < p; ++i) x(i, t) = rng.next_gaussian();
  return x;
}

}  // namespace

TEST_SUITE("moments") {

TEST_CASE("panel construction validates shape and finiteness") {
  CHECK_THROWS_AS(TimeSeriesPanel{Eigen::MatrixXd::Zero(3, 1)}, pddcov::DegenerateInput);
  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  bad(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(TimeSeriesPanel{bad}, pddcov::BadInput);
}

TEST_CASE("constant panel has zero covariance") {
  Eigen::MatrixXd x(3, 10);
  for (int t = 0; t < 10; ++t) x.col(t) << 1.0, -2.0, 0.5;
  const SymmetricMatrix s = pddcov::sample_covariance(TimeSeriesPanel(x));
  CHECK(pddcov::matrix_norm(s, pddcov::NormKind::elem_inf) < 1e-14);
}

TEST_CASE("two-point scalar series") {
  Eigen::MatrixXd x(1, 2);
  x << 1.0, 3.0;
  const SymmetricMatrix s = pddcov::sample_covariance(TimeSeriesPanel(x));
  // (1 + 9)/2 - 2^2 = 1
  CHECK(s(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("covariance matches the raw uncentered-formula oracle") {
  const Eigen::MatrixXd x = gaussian_panel(4, 50, 7);
  const SymmetricMatrix s = pddcov::sample_covariance(TimeSeriesPanel(x));
  const Eigen::MatrixXd ref = oracle::sample_cov_raw(x);
  CHECK((s.mat() - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("covariance is invariant to shifting every column by a constant") {
  const Eigen::MatrixXd x = gaussian_panel(3, 40, 8);
  Eigen::MatrixXd shifted = x;
  Eigen::VectorXd mu(3);
  mu << 100.0, -250.0, 3.5;
  shifted.colwise() += mu;
  const SymmetricMatrix a = pddcov::sample_covariance(TimeSeriesPanel(x));
  const SymmetricMatrix b = pddcov::sample_covariance(TimeSeriesPanel(shifted));
  CHECK((a.mat() - b.mat()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("covariance stays positive semidefinite on random panels") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const int p = 2 + int(s % 5);
    const int n = 2 + int((s / 5) % 9);
    const Eigen::MatrixXd x = gaussian_panel(p, n, 10'000 + s);
    const SymmetricMatrix cov = pddcov::sample_covariance(TimeSeriesPanel(x));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.mat());
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, cov.mat().trace()));
  }
}

TEST_CASE("correlation of uncorrelated rescaled coordinates is the identity") {
  // sample covariance diag(4, 9): correlation must be exactly I
  Eigen::MatrixXd x(2, 4);
  x << 2.0, -2.0, 2.0, -2.0,
      3.0, 3.0, -3.0, -3.0;
  const SymmetricMatrix r = pddcov::sample_correlation(TimeSeriesPanel(x));
  CHECK(r(0, 0) == 1.0);
  CHECK(r(1, 1) == 1.0);
  CHECK(std::fabs(r(0, 1)) < 1e-12);
}

TEST_CASE("perfectly collinear rows give correlation one") {
  Eigen::MatrixXd x(2, 20);
  pddcov::Rng rng(3, 0);
  for (int t = 0; t < 20; ++t) {
    x(0, t) = rng.next_gaussian();
    x(1, t) = 2.5 * x(0, t) - 1.0;
  }
  const SymmetricMatrix r = pddcov::sample_correlation(TimeSeriesPanel(x));
  CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("correlation matches the entrywise formula oracle") {
  const Eigen::MatrixXd x = gaussian_panel(3, 100, 9);
  const SymmetricMatrix s = pddcov::sample_covariance(TimeSeriesPanel(x));
  const SymmetricMatrix r = pddcov::sample_correlation(TimeSeriesPanel(x));
  for (int i = 0; i < 3; ++i) {
    CHECK(r(i, i) == 1.0);
    for (int j = 0; j < 3; ++j) {
      const double ref = s(i, j) / std::sqrt(s(i, i) * s(j, j));
      CHECK(r(i, j) == doctest::Approx(ref).epsilon(1e-14));
    }
  }
}

TEST_CASE("correlation is invariant to positive diagonal rescaling") {
  const Eigen::MatrixXd x = gaussian_panel(4, 60, 10);
  Eigen::MatrixXd scaled = x;
  const double scales[4] = {0.01, 3.0, 77.0, 0.5};
  for (int i = 0; i < 4; ++i) scaled.row(i) *= scales[i];
  const SymmetricMatrix a = pddcov::sample_correlation(TimeSeriesPanel(x));
  const SymmetricMatrix b = pddcov::sample_correlation(TimeSeriesPanel(scaled));
  CHECK((a.mat() - b.mat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("correlation reports the index of a constant series") {
  Eigen::MatrixXd x = gaussian_panel(3, 30, 11);
  x.row(1).setConstant(4.0);
  try {
    pddcov::sample_correlation(TimeSeriesPanel(x));
    FAIL("expected ZeroVariance");
  } catch (const pddcov::ZeroVariance& e) {
    CHECK(e.index == 1);
  }
}

TEST_CASE("autocorrelation of an alternating series") {
  const int n = 12;
  std::vector<double> series(n);
  for (int k = 0; k < n; ++k) series[k] = (k % 2 == 0) ? 1.0 : -1.0;
  const std::vector<double> rho = pddcov::sample_autocorrelation(series, 2);
  REQUIRE(rho.size() == 3);
  CHECK(rho[0] == 1.0);
  CHECK(rho[1] == doctest::Approx(-double(n - 1) / n).epsilon(1e-14));
}

TEST_CASE("autocorrelation of white noise is near zero") {
  pddcov::Rng rng(5, 2);
  std::vector<double> series(5000);
  for (double& v : series) v = rng.next_gaussian();
  const std::vector<double> rho = pddcov::sample_autocorrelation(series, 1);
  CHECK(std::fabs(rho[1]) < 0.05);
}

TEST_CASE("autocorrelation of an AR(1) series recovers the coefficient") {
  pddcov::Rng rng(6, 3);
  const int n = 10000;
  std::vector<double> series(n);
  double y = 0.0;
  for (int k = 0; k < n; ++k) {
    y = 0.5 * y + rng.next_gaussian();
    series[k] = y;
  }
  const std::vector<double> rho = pddcov::sample_autocorrelation(series, 1);
  CHECK(rho[1] == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("autocorrelation rejects bad lags and constant series") {
  std::vector<double> series = {1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(pddcov::sample_autocorrelation(series, 0), pddcov::BadLag);
  CHECK_THROWS_AS(pddcov::sample_autocorrelation(series, 4), pddcov::BadLag);
  std::vector<double> flat = {2.0, 2.0, 2.0};
  CHECK_THROWS_AS(pddcov::sample_autocorrelation(flat, 1), pddcov::ZeroVariance);
}

TEST_CASE("select_columns extracts panels for validation splits") {
  Eigen::MatrixXd x(2, 5);
  x << 0, 1, 2, 3, 4,
      10, 11, 12, 13, 14;
  const TimeSeriesPanel panel(x);
  const TimeSeriesPanel sub = panel.select_columns({0, 3, 4});
  REQUIRE(sub.n() == 3);
  CHECK(sub.data()(0, 1) == 3.0);
  CHECK(sub.data()(1, 2) == 14.0);
}

}  // TEST_SUITE
