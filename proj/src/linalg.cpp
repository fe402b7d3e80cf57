#include "pddcov/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace pddcov {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw BadInput(std::string(what) + " contains non-finite entries");
  }
}

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw BadInput("symmetric matrix must be square and non-empty");
  }
  require_finite(m, "symmetric matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw BadInput("matrix is not symmetric (max asymmetry " +
                   std::to_string(asym) + ")");
  }
  m_ = m.selfadjointView<Eigen::Upper>();
}

SymmetricMatrix SymmetricMatrix::mirror_upper(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw BadInput("symmetric matrix must be square and non-empty");
  }
  require_finite(m, "symmetric matrix");
  SymmetricMatrix out;
  out.m_ = m.selfadjointView<Eigen::Upper>();
  return out;
}

SymmetricMatrix SymmetricMatrix::identity(int p) {
  return mirror_upper(Eigen::MatrixXd::Identity(p, p));
}

SymmetricMatrix SymmetricMatrix::zero(int p) {
  return mirror_upper(Eigen::MatrixXd::Zero(p, p));
}

namespace {

double elementwise_norm(const Eigen::MatrixXd& m, NormKind kind) {
  switch (kind) {
    case NormKind::frobenius:
      return m.norm();
    case NormKind::l1:
      return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::elem_l1:
      return m.cwiseAbs().sum();
    case NormKind::elem_l1_off:
      return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
    case NormKind::elem_inf:
      return m.cwiseAbs().maxCoeff();
    default:
      throw BadInput("unhandled norm kind");
  }
}

}  // namespace

double matrix_norm(const SymmetricMatrix& m, NormKind kind) {
  if (kind == NormKind::spectral) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat(),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return elementwise_norm(m.mat(), kind);
}

double matrix_norm(const DenseMatrix& m, NormKind kind) {
  require_finite(m, "matrix");
  if (kind == NormKind::spectral) {
    // largest singular value; BDCSVD handles rectangular inputs
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  }
  if (kind == NormKind::elem_l1_off || kind == NormKind::l1) {
    if (m.rows() != m.cols() && kind == NormKind::elem_l1_off) {
      throw BadInput("off-diagonal norm requires a square matrix");
    }
  }
  return elementwise_norm(m, kind);
}

SymmetricMatrix kron(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  const long pa = a.dim();
  const long pb = b.dim();
  const long rows = pa * pb;
  // memory budget: the p^2 x p^2 result must stay under ~800 MB
  if (rows > 10000) {
    throw TooLarge("Kronecker product of dimension " + std::to_string(rows) +
                   " exceeds the memory budget");
  }
  Eigen::MatrixXd out(rows, rows);
  for (long j = 0; j < pa; ++j) {
    for (long l = 0; l < pa; ++l) {
      out.block(j * pb, l * pb, pb, pb) = a(static_cast<int>(j),
                                            static_cast<int>(l)) * b.mat();
    }
  }
  return SymmetricMatrix::mirror_upper(out);
}

SymmetricMatrix inverse(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  const Eigen::VectorXd ev = es.eigenvalues();
  const double emax = ev.cwiseAbs().maxCoeff();
  const double emin = ev.cwiseAbs().minCoeff();
  if (emax == 0.0 || emin <= 1e-12 * emax) {
    throw SingularMatrix("matrix is numerically singular (|eig| ratio " +
                         std::to_string(emax == 0.0 ? 0.0 : emin / emax) +
                         ")");
  }
  Eigen::MatrixXd inv = es.eigenvectors() *
                        ev.cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
  return SymmetricMatrix::mirror_upper(inv);
}

}  // namespace pddcov
