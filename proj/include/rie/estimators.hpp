#pragma once

#include <cstddef>
#include <optional>

#include "rie/spectral.hpp"

namespace rie {

/// Cleaned eigenvalues, in the same (descending) order as the source
/// eigensystem. May be non-monotone at finite n; no re-sorting is applied.
struct CleanedSpectrum {
  VectorXd cleaned;
  double eta = 0.0;
  double alpha = 0.0;  // eta = T^{-alpha}; NaN when eta was set explicitly
  double q = 0.0;
  bool trace_rescaled = false;
};

struct CleaningOptions {
  double alpha = 0.5;
  std::optional<double> eta;  // overrides T^{-alpha}
  std::optional<double> q;    // overrides n/T
  bool trace_preserve = false;
};

struct EstimatorReport {
  double frob_error_empirical = 0.0;
  double frob_error_cleaned = 0.0;
  double frob_error_oracle = 0.0;
  VectorXd per_eigenvalue_gap;  // |cleaned_k - u_k' Sigma u_k|
  VectorXd raw_gap;             // |lambda_k - u_k' Sigma u_k|
  std::size_t degenerate_clusters = 0;
};

/// (1/T) X X' for an n x T data matrix. No demeaning.
SymmetricMatrix empirical_covariance(const MatrixXd& data);

/// Subtracts each row's sample mean.
MatrixXd center_rows(const MatrixXd& data);

/// Frobenius-optimal eigenvalues u_k' Sigma u_k for the eigenbasis of E.
CleanedSpectrum oracle_rie(const EigenSystem& es, const SymmetricMatrix& sigma);

/// Nonlinear shrinkage lambda_k / |1 - q + lambda_k G(lambda_k + i eta)|^2.
CleanedSpectrum lp_clean(const EigenSystem& es, std::size_t t_samples,
                         const CleaningOptions& opts = {});

/// sum_k cleaned_k u_k u_k'
SymmetricMatrix assemble(const EigenSystem& es, const CleanedSpectrum& spectrum);

EstimatorReport report(const SymmetricMatrix& sigma, const EigenSystem& es,
                       const CleanedSpectrum& cleaned);

/// Number of groups of eigenvalues whose neighbours are closer than kClusterTol.
std::size_t count_degenerate_clusters(const VectorXd& descending_eigenvalues);

}  // namespace rie
