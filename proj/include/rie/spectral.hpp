#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace rie {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

/// Tolerance below which covariance eigenvalues are treated as exact zeros
/// (relative to max(1, largest eigenvalue)).
inline constexpr double kCovarianceZeroTol = 1e-10;

/// Real symmetric n x n matrix. Symmetry is exact: the constructor rejects
/// inputs that are not symmetric up to rounding and then mirrors the upper
/// triangle into the lower one.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(MatrixXd entries);

  static SymmetricMatrix identity(Index n);
  static SymmetricMatrix zero(Index n);
  static SymmetricMatrix diagonal(const VectorXd& d);

  Index dim() const noexcept { return m_.rows(); }
  const MatrixXd& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return m_.trace(); }

 private:
  MatrixXd m_;
};

/// Eigendecomposition with eigenvalues sorted descending and eigenvectors
/// sign-fixed so that the first non-negligible coordinate is positive.
struct EigenSystem {
  VectorXd eigenvalues;
  MatrixXd eigenvectors;  // column k pairs with eigenvalues(k)

  Index dim() const noexcept { return eigenvalues.size(); }
  double trace() const { return eigenvalues.sum(); }
  double operator_norm() const;
};

EigenSystem eig_sym(const SymmetricMatrix& m);

/// Eigendecomposition of a covariance matrix. Eigenvalues with magnitude up
/// to kCovarianceZeroTol * max(1, lambda_max) are snapped to exactly zero;
/// anything more negative is rejected with InputError.
EigenSystem eig_covariance(const SymmetricMatrix& m);

double frobenius_norm(const SymmetricMatrix& m);
double frobenius_norm(const MatrixXd& m);
double operator_norm(const SymmetricMatrix& m);

/// Symmetric PSD square root. Throws InputError for a non-PSD argument.
SymmetricMatrix sym_sqrt(const SymmetricMatrix& m);

/// U diag(values) U'.
SymmetricMatrix reconstruct(const MatrixXd& eigenvectors, const VectorXd& values);

}  // namespace rie
