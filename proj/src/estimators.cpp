#include "rie/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rie/errors.hpp"
#include "rie/transforms.hpp"

namespace rie {

SymmetricMatrix empirical_covariance(const MatrixXd& data) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw InputError("empirical_covariance: need n >= 1 and T >= 1, got " +
                     std::to_string(data.rows()) + "x" + std::to_string(data.cols()));
  }
  if (!data.allFinite()) throw InputError("empirical_covariance: non-finite data entry");
  MatrixXd e = MatrixXd::Zero(data.rows(), data.rows());
  e.selfadjointView<Eigen::Lower>().rankUpdate(data, 1.0 / static_cast<double>(data.cols()));
  e.triangularView<Eigen::StrictlyUpper>() = e.transpose();
  return SymmetricMatrix(std::move(e));
}

MatrixXd center_rows(const MatrixXd& data) {
  if (data.cols() == 0) return data;
  const VectorXd means = data.rowwise().mean();
  return data.colwise() - means;
}

CleanedSpectrum oracle_rie(const EigenSystem& es, const SymmetricMatrix& sigma) {
  CleanedSpectrum out;
  out.cleaned = projected_variances(es, sigma);
  // Rounding can push a zero projection to -1e-17.
  out.cleaned = out.cleaned.cwiseMax(0.0);
  out.eta = 0.0;
  out.alpha = std::numeric_limits<double>::quiet_NaN();
  out.q = std::numeric_limits<double>::quiet_NaN();
  return out;
}

CleanedSpectrum lp_clean(const EigenSystem& es, std::size_t t_samples, const CleaningOptions& opts) {
  if (t_samples == 0) throw InputError("lp_clean: sample count T must be >= 1");
  if (opts.eta) {
    if (!(*opts.eta > 0.0)) throw InputError("lp_clean: eta override must be > 0");
  } else if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) {
    throw InputError("lp_clean: alpha must lie in (0, 1), got " + std::to_string(opts.alpha));
  }
  if (opts.q && !(*opts.q >= 0.0)) throw InputError("lp_clean: q override must be >= 0");
  if (es.dim() > 0 && es.eigenvalues.minCoeff() < 0.0) {
    throw InputError("lp_clean: eigenvalues must be >= 0");
  }

  const double t = static_cast<double>(t_samples);
  CleanedSpectrum out;
  out.alpha = opts.eta ? std::numeric_limits<double>::quiet_NaN() : opts.alpha;
  out.eta = opts.eta.value_or(std::pow(t, -opts.alpha));
  out.q = opts.q.value_or(static_cast<double>(es.dim()) / t);
  out.cleaned.resize(es.dim());
  for (Index k = 0; k < es.dim(); ++k) {
    const double lambda = es.eigenvalues(k);
    const Complex g = stieltjes_g(es, t_samples, Complex(lambda, out.eta));
    out.cleaned(k) = cleaned_eigenvalue(lambda, g, out.q);
  }
  if (opts.trace_preserve) {
    const double total = out.cleaned.sum();
    if (total > 0.0) {
      out.cleaned *= es.trace() / total;
      out.trace_rescaled = true;
    }
  }
  return out;
}

SymmetricMatrix assemble(const EigenSystem& es, const CleanedSpectrum& spectrum) {
  if (spectrum.cleaned.size() != es.dim()) {
    throw InputError("assemble: spectrum has " + std::to_string(spectrum.cleaned.size()) +
                     " values for a " + std::to_string(es.dim()) + "-dim eigensystem");
  }
  return reconstruct(es.eigenvectors, spectrum.cleaned);
}

std::size_t count_degenerate_clusters(const VectorXd& v) {
  std::size_t clusters = 0;
  bool in_cluster = false;
  for (Index k = 1; k < v.size(); ++k) {
    const bool tied = std::abs(v(k - 1) - v(k)) <= kClusterTol;
    if (tied && !in_cluster) ++clusters;
    in_cluster = tied;
  }
  return clusters;
}

EstimatorReport report(const SymmetricMatrix& sigma, const EigenSystem& es,
                       const CleanedSpectrum& cleaned) {
  if (sigma.dim() != es.dim() || cleaned.cleaned.size() != es.dim()) {
    throw InputError("report: dimension mismatch");
  }
  const CleanedSpectrum oracle = oracle_rie(es, sigma);
  const MatrixXd empirical = reconstruct(es.eigenvectors, es.eigenvalues).matrix();

  EstimatorReport r;
  r.frob_error_empirical = frobenius_norm(MatrixXd(empirical - sigma.matrix()));
  r.frob_error_cleaned = frobenius_norm(MatrixXd(assemble(es, cleaned).matrix() - sigma.matrix()));
  r.frob_error_oracle = frobenius_norm(MatrixXd(assemble(es, oracle).matrix() - sigma.matrix()));
  r.per_eigenvalue_gap = (cleaned.cleaned - oracle.cleaned).cwiseAbs();
  r.raw_gap = (es.eigenvalues - oracle.cleaned).cwiseAbs();
  r.degenerate_clusters = count_degenerate_clusters(es.eigenvalues);
  return r;
}

}  // namespace rie
