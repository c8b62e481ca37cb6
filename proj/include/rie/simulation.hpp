#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rie/estimators.hpp"
#include "rie/models.hpp"
#include "rie/transforms.hpp"

namespace rie {

/// Probes closer than this to the real axis are rejected by verify_theorem1.
inline constexpr double kMinProbeImag = 0.05;

/// Sigma^{1/2} Y with Y an n x T matrix of i.i.d. standard normals.
MatrixXd sample_gaussian(const SymmetricMatrix& sigma, std::size_t t_samples, std::uint64_t seed);
MatrixXd sample_gaussian(const GroundTruth& truth, std::size_t t_samples, std::uint64_t seed);

/// {1+0.5i, 1+0.1i, 0.5+0.5i, 2+0.25i} scaled by Tr Sigma / n.
std::vector<Complex> default_probes(const RegimeStats& stats);

/// Lower bound on |Im H| at z = x + i eta: |eta| (Tr E / T) / (2x^2 + 2||E||^2 + eta^2).
struct ImHBound {
  double abs_im_h = 0.0;
  double bound = 0.0;
  bool holds() const { return abs_im_h >= bound; }
};

ImHBound imh_bound(const EigenSystem& es, std::size_t t_samples, Complex z);

struct TrialReport {
  std::uint64_t seed = 0;
  Index n = 0;
  std::size_t t_samples = 0;
  double q = 0.0;
  std::vector<Complex> z_points;
  std::vector<double> theorem1_residual;  // |L - (1 - 1/(1 - q + zG))|
  std::vector<double> relation_residual;  // |H - (L + LH)|
  std::vector<double> identity_residual;  // |H - (zG - q)|
  bool imh_bound_ok = true;
  double min_one_plus_h = 0.0;
  double opnorm_ratio = 0.0;  // ||E|| / (q ||Sigma||)
  double trace_ratio = 0.0;   // Tr E / Tr Sigma
  double sigma_operator_norm = 0.0;
  double sigma_mean_eigenvalue = 0.0;
  EstimatorReport estimator_report;
};

/// One draw of the data; G, L and H evaluated at each probe.
TrialReport verify_theorem1(const GroundTruth& truth, std::size_t t_samples,
                            std::span<const Complex> z_points, std::uint64_t seed,
                            const CleaningOptions& cleaning = {});
TrialReport verify_theorem1(const CovarianceModel& model, std::size_t t_samples,
                            std::span<const Complex> z_points, std::uint64_t seed);

struct ConvergenceRow {
  Index n = 0;
  std::size_t t_samples = 0;
  double median_theorem1 = 0.0;
  double median_relation = 0.0;
  double max_identity = 0.0;
  bool imh_bound_ok = true;
  double min_one_plus_h = 0.0;
};

struct ConvergenceStudy {
  std::string model;
  Complex probe;
  std::vector<ConvergenceRow> rows;
  std::vector<TrialReport> trials;  // ordered by (size, seed index)

  bool theorem1_monotone() const;
  bool relation_monotone() const;
};

/// Medians over `seeds` draws of the |L - (1 - 1/(1 - q + zG))| and |H - (L + LH)| residuals at
/// each dimension n (with T = ratio * n). The probe is scaled by Tr Sigma / n.
ConvergenceStudy theorem1_convergence(const CovarianceModel& model, std::span<const Index> dims,
                                      double samples_per_dim, std::size_t seeds,
                                      std::uint64_t master_seed, Complex unscaled_probe,
                                      std::size_t jobs = 1);

/// Random PSD instance (n <= max_dim) checked for H = zG - q and the Im H bound.
struct IdentityReport {
  std::uint64_t seed = 0;
  Index n = 0;
  std::size_t t_samples = 0;
  std::vector<Complex> z_points;
  std::vector<double> identity_residual;
  std::vector<ImHBound> imh;
  double max_identity_residual = 0.0;
  bool imh_bound_ok = true;
};

IdentityReport verify_identities(std::uint64_t seed, Index max_dim = 50);

struct LemmaTrial {
  std::uint64_t seed = 0;
  double opnorm_ratio = 0.0;    // ||E|| / ||Sigma||
  double opnorm_q_ratio = 0.0;  // ||E|| / (q ||Sigma||)
  double trace_ratio = 0.0;     // Tr E / Tr Sigma
};

struct LemmaSummary {
  Index n = 0;
  std::size_t t_samples = 0;
  std::size_t trials = 0;
  double mean_trace_ratio = 0.0;
  double trace_ratio_se = 0.0;
  double variance_trace = 0.0;   // empirical Var(Tr E)
  double variance_bound = 0.0;   // 2 Tr Sigma^2 / T
  double max_opnorm_ratio = 0.0;
  double max_opnorm_q_ratio = 0.0;
  double min_trace_ratio = 0.0;
  bool mean_ok = false;      // |mean - 1| <= 4 s.e.
  bool variance_ok = false;  // variance <= 1.5 * bound
  std::vector<LemmaTrial> per_trial;
};

LemmaSummary verify_lemma_bounds(const CovarianceModel& model, std::size_t t_samples,
                                 std::size_t trials, std::uint64_t master_seed,
                                 std::size_t jobs = 1);

}  // namespace rie
