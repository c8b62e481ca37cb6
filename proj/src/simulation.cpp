#include "rie/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rie/errors.hpp"
#include "rie/parallel.hpp"
#include "rie/random.hpp"

namespace rie {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

bool strictly_decreasing(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*field) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].*field < rows[i - 1].*field)) return false;
  }
  return true;
}

}  // namespace

MatrixXd sample_gaussian(const GroundTruth& truth, std::size_t t_samples, std::uint64_t seed) {
  if (t_samples == 0) throw InputError("sample_gaussian: T must be >= 1");
  NormalStream normal(seed);
  const MatrixXd y = normal.matrix(truth.sigma.dim(), static_cast<Index>(t_samples));
  return truth.root.matrix() * y;
}

MatrixXd sample_gaussian(const SymmetricMatrix& sigma, std::size_t t_samples, std::uint64_t seed) {
  return sample_gaussian(GroundTruth(sigma), t_samples, seed);
}

std::vector<Complex> default_probes(const RegimeStats& stats) {
  const double scale = stats.mean_eigenvalue;
  return {Complex(1.0, 0.5) * scale, Complex(1.0, 0.1) * scale, Complex(0.5, 0.5) * scale,
          Complex(2.0, 0.25) * scale};
}

ImHBound imh_bound(const EigenSystem& es, std::size_t t_samples, Complex z) {
  const double x = z.real();
  const double eta = z.imag();
  const double norm = es.operator_norm();
  const double t = static_cast<double>(t_samples);
  ImHBound b;
  b.abs_im_h = std::abs(h_functional(es, t_samples, z).imag());
  b.bound = std::abs(eta) * (es.trace() / t) / (2.0 * x * x + 2.0 * norm * norm + eta * eta);
  return b;
}

TrialReport verify_theorem1(const GroundTruth& truth, std::size_t t_samples,
                            std::span<const Complex> z_points, std::uint64_t seed,
                            const CleaningOptions& cleaning) {
  for (const Complex& z : z_points) {
    if (std::abs(z.imag()) < kMinProbeImag) {
      throw InputError("verify_theorem1: probe " + std::to_string(z.real()) + "+" +
                       std::to_string(z.imag()) + "i is closer than 0.05 to the real axis");
    }
  }
  const MatrixXd data = sample_gaussian(truth, t_samples, seed);
  const SymmetricMatrix e = empirical_covariance(data);
  const EigenSystem es = eig_covariance(e);
  const VectorXd proj = projected_variances(es, truth.sigma);

  TrialReport r;
  r.seed = seed;
  r.n = truth.sigma.dim();
  r.t_samples = t_samples;
  r.q = static_cast<double>(r.n) / static_cast<double>(t_samples);
  r.z_points.assign(z_points.begin(), z_points.end());
  r.min_one_plus_h = std::numeric_limits<double>::infinity();
  for (const Complex& z : z_points) {
    const ResolventPoint p = evaluate_resolvent(es, t_samples, z, &proj);
    const Complex l = *p.l;
    r.theorem1_residual.push_back(std::abs(l - theorem1_rhs(p.g, z, p.q)));
    r.relation_residual.push_back(std::abs(p.h - (l + l * p.h)));
    r.identity_residual.push_back(std::abs(p.h - (z * p.g - p.q)));
    r.imh_bound_ok = r.imh_bound_ok && imh_bound(es, t_samples, z).holds();
    r.min_one_plus_h = std::min(r.min_one_plus_h, std::abs(1.0 + p.h));
  }
  r.sigma_operator_norm = truth.stats.operator_norm;
  r.sigma_mean_eigenvalue = truth.stats.mean_eigenvalue;
  r.opnorm_ratio = es.operator_norm() / (r.q * truth.stats.operator_norm);
  r.trace_ratio = es.trace() / truth.stats.trace;
  r.estimator_report = report(truth.sigma, es, lp_clean(es, t_samples, cleaning));
  return r;
}

TrialReport verify_theorem1(const CovarianceModel& model, std::size_t t_samples,
                            std::span<const Complex> z_points, std::uint64_t seed) {
  return verify_theorem1(GroundTruth(make_sigma(model)), t_samples, z_points, seed);
}

bool ConvergenceStudy::theorem1_monotone() const {
  return strictly_decreasing(rows, &ConvergenceRow::median_theorem1);
}

bool ConvergenceStudy::relation_monotone() const {
  return strictly_decreasing(rows, &ConvergenceRow::median_relation);
}

ConvergenceStudy theorem1_convergence(const CovarianceModel& model, std::span<const Index> dims,
                                      double samples_per_dim, std::size_t seeds,
                                      std::uint64_t master_seed, Complex unscaled_probe,
                                      std::size_t jobs) {
  if (!(samples_per_dim > 0.0)) throw InputError("theorem1_convergence: samples_per_dim must be > 0");
  ConvergenceStudy study;
  study.model = model.describe();
  study.probe = unscaled_probe;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    CovarianceModel sized = model;
    sized.dim = dims[d];
    const GroundTruth truth(make_sigma(sized));
    const auto t = static_cast<std::size_t>(std::llround(samples_per_dim * static_cast<double>(dims[d])));
    const Complex probe = unscaled_probe * truth.stats.mean_eigenvalue;

    std::vector<TrialReport> trials(seeds);
    parallel_for(seeds, jobs, [&](std::size_t s) {
      const std::uint64_t seed = derive_seed(master_seed, d * seeds + s);
      trials[s] = verify_theorem1(truth, t, std::span<const Complex>(&probe, 1), seed);
    });

    ConvergenceRow row;
    row.n = dims[d];
    row.t_samples = t;
    row.min_one_plus_h = std::numeric_limits<double>::infinity();
    std::vector<double> thm, rel;
    for (const TrialReport& tr : trials) {
      thm.push_back(tr.theorem1_residual.front());
      rel.push_back(tr.relation_residual.front());
      row.max_identity = std::max(row.max_identity, tr.identity_residual.front());
      row.imh_bound_ok = row.imh_bound_ok && tr.imh_bound_ok;
      row.min_one_plus_h = std::min(row.min_one_plus_h, tr.min_one_plus_h);
    }
    row.median_theorem1 = median(thm);
    row.median_relation = median(rel);
    study.rows.push_back(row);
    std::move(trials.begin(), trials.end(), std::back_inserter(study.trials));
  }
  return study;
}

IdentityReport verify_identities(std::uint64_t seed, Index max_dim) {
  if (max_dim < 1) throw InputError("verify_identities: max_dim must be >= 1");
  NormalStream rng(seed);
  IdentityReport r;
  r.seed = seed;
  r.n = 1 + static_cast<Index>(rng.uniform() * static_cast<double>(max_dim));
  r.n = std::min(r.n, max_dim);
  r.t_samples = 1 + static_cast<std::size_t>(rng.uniform() * 3.0 * static_cast<double>(r.n));

  const MatrixXd b = rng.matrix(r.n, r.n);
  const SymmetricMatrix sigma(MatrixXd(b * b.transpose() / static_cast<double>(r.n)));
  const GroundTruth truth(sigma);
  const MatrixXd data = truth.root.matrix() * rng.matrix(r.n, static_cast<Index>(r.t_samples));
  const EigenSystem es = eig_covariance(empirical_covariance(data));
  const double q = static_cast<double>(r.n) / static_cast<double>(r.t_samples);

  r.z_points = default_probes(truth.stats);
  for (const Complex& z : r.z_points) {
    const Complex g = stieltjes_g(es, r.t_samples, z);
    const Complex h = h_functional(es, r.t_samples, z);
    const double residual = std::abs(h - (z * g - q));
    r.identity_residual.push_back(residual);
    r.max_identity_residual = std::max(r.max_identity_residual, residual);
    const ImHBound b2 = imh_bound(es, r.t_samples, z);
    r.imh.push_back(b2);
    r.imh_bound_ok = r.imh_bound_ok && b2.holds();
  }
  return r;
}

LemmaSummary verify_lemma_bounds(const CovarianceModel& model, std::size_t t_samples,
                                 std::size_t trials, std::uint64_t master_seed, std::size_t jobs) {
  if (trials < 1) throw InputError("verify_lemma_bounds: trials must be >= 1");
  if (t_samples < 1) throw InputError("verify_lemma_bounds: T must be >= 1");
  const GroundTruth truth(make_sigma(model));
  const double q = static_cast<double>(truth.sigma.dim()) / static_cast<double>(t_samples);

  LemmaSummary s;
  s.n = truth.sigma.dim();
  s.t_samples = t_samples;
  s.trials = trials;
  s.per_trial.resize(trials);
  parallel_for(trials, jobs, [&](std::size_t i) {
    LemmaTrial& tr = s.per_trial[i];
    tr.seed = derive_seed(master_seed, i);
    const MatrixXd x = sample_gaussian(truth, t_samples, tr.seed);
    const SymmetricMatrix e = empirical_covariance(x);
    const double e_norm = operator_norm(e);
    tr.opnorm_ratio = e_norm / truth.stats.operator_norm;
    tr.opnorm_q_ratio = e_norm / (q * truth.stats.operator_norm);
    tr.trace_ratio = e.trace() / truth.stats.trace;
  });

  const double count = static_cast<double>(trials);
  double sum = 0.0;
  s.min_trace_ratio = std::numeric_limits<double>::infinity();
  for (const LemmaTrial& tr : s.per_trial) {
    sum += tr.trace_ratio;
    s.max_opnorm_ratio = std::max(s.max_opnorm_ratio, tr.opnorm_ratio);
    s.max_opnorm_q_ratio = std::max(s.max_opnorm_q_ratio, tr.opnorm_q_ratio);
    s.min_trace_ratio = std::min(s.min_trace_ratio, tr.trace_ratio);
  }
  s.mean_trace_ratio = sum / count;
  double ss = 0.0;
  for (const LemmaTrial& tr : s.per_trial) ss += (tr.trace_ratio - s.mean_trace_ratio) * (tr.trace_ratio - s.mean_trace_ratio);
  const double var_ratio = trials > 1 ? ss / (count - 1.0) : 0.0;
  s.trace_ratio_se = std::sqrt(var_ratio / count);
  s.variance_trace = var_ratio * truth.stats.trace * truth.stats.trace;
  s.variance_bound = 2.0 * truth.stats.trace_of_square / static_cast<double>(t_samples);
  s.mean_ok = std::abs(s.mean_trace_ratio - 1.0) <= 4.0 * s.trace_ratio_se;
  s.variance_ok = s.variance_trace <= 1.5 * s.variance_bound;
  return s;
}

}  // namespace rie
