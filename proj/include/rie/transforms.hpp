#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rie/quadrature.hpp"
#include "rie/spectral.hpp"

namespace rie {

using Complex = std::complex<double>;

/// Real-axis probes closer than this to an eigenvalue are poles.
inline constexpr double kPoleTol = 1e-12;
/// Eigenvalues closer than this are one degenerate cluster.
inline constexpr double kClusterTol = 1e-9;
/// Default isolation window, as a fraction of the gap to the nearest distinct eigenvalue.
inline constexpr double kDefaultWindowFraction = 0.45;

/// G, L and H evaluated at one complex point. All three are normalized by the
/// sample count T, not by the dimension n.
struct ResolventPoint {
  Complex z;
  Complex g;
  std::optional<Complex> l;  // needs the true covariance
  Complex h;
  double q = 0.0;
  std::size_t t_samples = 0;
};

/// (1/T) sum_k 1/(z - lambda_k)
Complex stieltjes_g(const EigenSystem& es, std::size_t t_samples, Complex z);

/// (1/T) sum_k (u_k' Sigma u_k)/(z - lambda_k) = (1/T) Tr[(z - E)^{-1} Sigma]
Complex stieltjes_l(const EigenSystem& es, const SymmetricMatrix& sigma, std::size_t t_samples,
                    Complex z);

/// Same as above with the projections u_k' Sigma u_k precomputed.
Complex stieltjes_l(const EigenSystem& es, const VectorXd& projections, std::size_t t_samples,
                    Complex z);

/// (1/T) sum_k lambda_k/(z - lambda_k); equals z G - q.
Complex h_functional(const EigenSystem& es, std::size_t t_samples, Complex z);

/// u_k' Sigma u_k for every eigenvector of `es`.
VectorXd projected_variances(const EigenSystem& es, const SymmetricMatrix& sigma);

ResolventPoint evaluate_resolvent(const EigenSystem& es, std::size_t t_samples, Complex z,
                                  const VectorXd* projections = nullptr);

/// 1 - 1/(1 - q + z g). Throws SingularError when |1 - q + z g| <= 1e-12.
Complex theorem1_rhs(Complex g, Complex z, double q);

/// lambda / |1 - q + lambda g|^2 with g = G(lambda + i eta). Zero for lambda = 0.
double cleaned_eigenvalue(double lambda, Complex g_at_lambda, double q);

/// Ratio of the integrals of Im L and Im G over [lambda_k - eps, lambda_k + eps]
/// at height eta. Tends to u_k' Sigma u_k as eta -> 0. Eigenvalues within
/// kClusterTol of lambda_k count as one cluster and yield the cluster average.
/// `epsilon` defaults to 0.45 times the gap to the nearest distinct eigenvalue.
double rn_ratio_oracle(const EigenSystem& es, const SymmetricMatrix& sigma, std::size_t t_samples,
                       Index k, std::optional<double> epsilon, double eta);

/// Density -(1/pi) Im g(x_j + i eta) sampled on a grid.
struct SignedMeasureGrid {
  std::vector<double> grid;
  std::vector<double> density;
  double eta = 0.0;

  /// Trapezoid rule over the grid points lying inside [a, b].
  double mass(double a, double b) const;
};

using StieltjesFn = std::function<Complex(Complex)>;

SignedMeasureGrid stieltjes_invert(const StieltjesFn& transform, std::span<const double> grid,
                                   double eta);

/// Mass of [a, b] under the measure recovered at resolution eta, integrated
/// with the converging composite trapezoid rule.
QuadratureResult inverted_mass(const StieltjesFn& transform, double a, double b, double eta,
                               const QuadratureOptions& opts = {});

}  // namespace rie
