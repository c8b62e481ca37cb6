#include "rie/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rie/errors.hpp"

namespace rie {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kSignTol = 1e-12;

void require_finite(const MatrixXd& m, const char* who) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) {
        throw InputError(std::string(who) + ": non-finite entry at (" + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw InputError("SymmetricMatrix: need a square matrix with dim >= 1, got " +
                     std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
  require_finite(m_, "SymmetricMatrix");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw InputError("SymmetricMatrix: input is not symmetric (max |M - M'| = " +
                     std::to_string(asym) + ")");
  }
  m_.triangularView<Eigen::StrictlyLower>() = m_.transpose().triangularView<Eigen::StrictlyLower>();
}

SymmetricMatrix SymmetricMatrix::identity(Index n) {
  return SymmetricMatrix(MatrixXd::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::zero(Index n) { return SymmetricMatrix(MatrixXd::Zero(n, n)); }

SymmetricMatrix SymmetricMatrix::diagonal(const VectorXd& d) {
  return SymmetricMatrix(MatrixXd(d.asDiagonal()));
}

double EigenSystem::operator_norm() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

EigenSystem eig_sym(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw InputError("eig_sym: eigensolver did not converge");
  }
  const Index n = m.dim();
  const VectorXd& vals = solver.eigenvalues();
  const MatrixXd& vecs = solver.eigenvectors();

  // Eigen returns ascending order; reverse into descending.
  EigenSystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    es.eigenvalues(k) = vals(n - 1 - k);
    es.eigenvectors.col(k) = vecs.col(n - 1 - k);
  }
  for (Index k = 0; k < n; ++k) {
    auto col = es.eigenvectors.col(k);
    for (Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > kSignTol) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
  }
  return es;
}

EigenSystem eig_covariance(const SymmetricMatrix& m) {
  EigenSystem es = eig_sym(m);
  const double cutoff = kCovarianceZeroTol * std::max(1.0, es.eigenvalues.size() ? es.eigenvalues(0) : 0.0);
  for (Index k = 0; k < es.dim(); ++k) {
    double& v = es.eigenvalues(k);
    if (v < -cutoff) {
      throw InputError("eig_covariance: eigenvalue " + std::to_string(v) +
                       " is negative; not a covariance matrix");
    }
    if (std::abs(v) <= cutoff) v = 0.0;
  }
  return es;
}

double frobenius_norm(const MatrixXd& m) { return m.norm(); }

double frobenius_norm(const SymmetricMatrix& m) { return m.matrix().norm(); }

double operator_norm(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SymmetricMatrix reconstruct(const MatrixXd& eigenvectors, const VectorXd& values) {
  if (eigenvectors.cols() != values.size()) {
    throw InputError("reconstruct: " + std::to_string(values.size()) + " values for " +
                     std::to_string(eigenvectors.cols()) + " eigenvectors");
  }
  MatrixXd out = eigenvectors * values.asDiagonal() * eigenvectors.transpose();
  // Rounding leaves |M - M'| ~ 1e-16; symmetrize before the exact-symmetry constructor.
  out = 0.5 * (out + out.transpose());
  return SymmetricMatrix(std::move(out));
}

SymmetricMatrix sym_sqrt(const SymmetricMatrix& m) {
  EigenSystem es = eig_covariance(m);
  return reconstruct(es.eigenvectors, es.eigenvalues.cwiseSqrt());
}

}  // namespace rie
