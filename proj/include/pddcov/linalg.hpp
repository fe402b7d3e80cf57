#pragma once

#include <Eigen/Dense>

#include "pddcov/errors.hpp"

namespace pddcov {

// Rectangular intermediates (Kronecker products, lag-shifted correlation
// tables) are plain Eigen matrices.
using DenseMatrix = Eigen::MatrixXd;

// Dense symmetric matrix with the symmetry enforced at construction: the
// upper triangle is the canonical storage and is mirrored onto the lower, so
// entries(i,j) == entries(j,i) holds exactly, not just within rounding.
class SymmetricMatrix {
 public:
  // Requires an exactly-square, finite matrix that is symmetric within
  // 1e-9 relative tolerance; throws BadInput otherwise.
  explicit SymmetricMatrix(const Eigen::MatrixXd& m);

  // Trusts the upper triangle (producers that only fill one half).
  static SymmetricMatrix mirror_upper(const Eigen::MatrixXd& m);

  static SymmetricMatrix identity(int p);
  static SymmetricMatrix zero(int p);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& mat() const { return m_; }

 private:
  SymmetricMatrix() = default;
  Eigen::MatrixXd m_;
};

enum class NormKind {
  spectral,     // largest singular value
  frobenius,    // sqrt of sum of squares
  l1,           // matrix l1: max column absolute sum
  elem_l1,      // sum of |entries|
  elem_l1_off,  // sum of |entries| off the diagonal
  elem_inf      // max |entry|
};

double matrix_norm(const SymmetricMatrix& m, NormKind kind);
double matrix_norm(const DenseMatrix& m, NormKind kind);

// Kronecker product A (x) B for square symmetric inputs; the (i,j)-th row of
// the result is its [i + (j-1)p]-th row, matching vec-column-major indexing.
// Throws TooLarge when the result would not fit the memory budget.
SymmetricMatrix kron(const SymmetricMatrix& a, const SymmetricMatrix& b);

// Inverse via full symmetric eigendecomposition. Throws SingularMatrix when
// min |eigenvalue| <= 1e-12 * max |eigenvalue| (e.g. sample covariance with
// p >= n).
SymmetricMatrix inverse(const SymmetricMatrix& m);

// Throws BadInput when m contains NaN or Inf.
void require_finite(const Eigen::MatrixXd& m, const char* what);

}  // namespace pddcov
