#pragma once

#include <array>
#include <functional>
#include <optional>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rie/spectral.hpp"
#include "rie/transforms.hpp"

namespace rie {

/// Monte Carlo agreement threshold, in standard errors.
inline constexpr double kAgreementSigmas = 4.0;

/// Sample mean with its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// A paired comparison of two sides of an identity estimated on the same
/// draws. `diff_se` is the standard error of the per-draw difference.
struct SideBySide {
  std::string label;
  MeanEstimate lhs;
  MeanEstimate rhs;
  double diff = 0.0;
  double diff_se = 0.0;
  bool agrees = false;
};

// ---- E[X_i f(X)] = sum_k Sigma_ik E[d_k f(X)] --------------------------------

/// Registered scalar test functions: "linear" (f = x_j for every j),
/// "quadratic" (x'Ax), "smooth_bounded" (tanh(a'x + 1/2)) and "cubic"
/// ((a'x)^3 + x_1 x_d).
const std::vector<std::string>& stein_functions();

struct SteinSummary {
  std::string function;
  Index dim = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<SideBySide> checks;
  MatrixXd second_moments;  // "linear" only: estimate of E[X_i X_j]
  bool ok = false;
};

SteinSummary verify_stein(const SymmetricMatrix& sigma, std::string_view function,
                          std::size_t trials, std::uint64_t seed);

// ---- E X'F(X)X = Tr(Sigma E F(X)) + sum_k (E Sigma (d_k F)(X) X)_k ---------

/// Registered matrix-valued families: "identity", "constant" (a fixed
/// symmetric A) and "resolvent" ((z - x x')^{-1}, derivative by central
/// differences).
const std::vector<std::string>& stein_matrix_families();

struct SteinMatrixSummary {
  std::string family;
  Index dim = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Complex z;
  std::vector<SideBySide> checks;  // real and imaginary parts
  /// For the constant families, E X'AX against its closed form Tr(A Sigma).
  std::optional<SideBySide> closed_form;
  bool ok = false;
};

SteinMatrixSummary verify_stein_matrix(const SymmetricMatrix& sigma, std::string_view family,
                                       std::size_t trials, std::uint64_t seed,
                                       Complex z = Complex(0.0, 2.0));

/// Central-difference derivative of a matrix function along coordinate k,
/// step 1e-5 * max(1, |x_k|).
Eigen::MatrixXcd central_difference(const std::function<Eigen::MatrixXcd(const VectorXd&)>& f,
                                    const VectorXd& x, Index k);

/// (z - x x')^{-1}
Eigen::MatrixXcd rank_one_resolvent(const VectorXd& x, Complex z);

// ---- Var f(X) <= E|grad f|^2 and the sub-Gaussian tail ----------------------

/// "linear", "constant", "max_coordinate", "euclidean_norm", "smoothed_abs".
const std::vector<std::string>& concentration_functions();

struct TailCheck {
  double t = 0.0;
  double probability = 0.0;  // empirical P(|f - mean| >= t)
  double bound = 0.0;        // 2 exp(-t^2 / (2 k^2))
  double slack = 0.0;
  bool ok = false;
};

struct ConcentrationCheck {
  std::string function;
  Index dim = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double lipschitz = 0.0;
  MeanEstimate variance;
  MeanEstimate grad_sq;  // E |grad f|^2
  bool poincare_ok = false;
  std::vector<TailCheck> tails;  // empty when f is constant
  bool tail_ok = false;
  bool ok() const { return poincare_ok && tail_ok; }
};

ConcentrationCheck verify_concentration(std::string_view function, Index dim, std::size_t trials,
                                        std::uint64_t seed);

struct ConcentrationSummary {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<ConcentrationCheck> checks;
  bool ok = false;
};

/// Every registered function on a standard Gaussian vector in dimension `dim`.
ConcentrationSummary verify_concentration(std::size_t trials, std::uint64_t seed, Index dim = 10);

}  // namespace rie
