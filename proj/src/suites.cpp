#include "rie/suites.hpp"

#include <algorithm>
#include <limits>

#include "rie/errors.hpp"
#include "rie/gaussian_checks.hpp"
#include "rie/json_io.hpp"
#include "rie/models.hpp"
#include "rie/parallel.hpp"
#include "rie/random.hpp"
#include "rie/simulation.hpp"

namespace rie {

using nlohmann::json;

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr double kConvergenceTol = 0.05;
constexpr double kRelationTol = 0.05;
constexpr double kRelationFraction = 0.9;
constexpr double kOnePlusHFloor = 0.01;
constexpr std::size_t kSteinSeeds = 10;
constexpr Index kSteinMaxDim = 3;

json tagged(json j, const std::string& suite) {
  j["suite"] = suite;
  return j;
}

SuiteCheck check(std::string name, bool pass, double value, double threshold) {
  return SuiteCheck{std::move(name), pass, value, threshold};
}

SuiteResult identities_suite(const SuiteOptions& o) {
  const std::size_t count = o.trials.value_or(100);
  std::vector<IdentityReport> reports(count);
  parallel_for(count, o.jobs, [&](std::size_t i) { reports[i] = verify_identities(derive_seed(o.seed, i)); });

  SuiteResult r;
  r.suite = "identities";
  double worst = 0.0;
  std::size_t violations = 0;
  for (const IdentityReport& rep : reports) {
    worst = std::max(worst, rep.max_identity_residual);
    for (const ImHBound& b : rep.imh) violations += b.holds() ? 0 : 1;
    r.trials.push_back(tagged(to_json(rep), r.suite));
  }
  r.checks.push_back(check("H = zG - q residual <= 1e-12", worst <= kIdentityTol, worst, kIdentityTol));
  r.checks.push_back(check("Im H lower bound violations == 0", violations == 0, static_cast<double>(violations), 0.0));
  return r;
}

SuiteResult theorem1_suite(const SuiteOptions& o) {
  std::vector<std::string> models;
  if (o.model) {
    models.push_back(*o.model);
  } else {
    models = {"identity", "toeplitz:0.5"};
  }
  const std::size_t seeds = o.trials.value_or(50);
  SuiteResult r;
  r.suite = "theorem1";
  for (std::size_t m = 0; m < models.size(); ++m) {
    const CovarianceModel model = CovarianceModel::parse(models[m], o.sizes.empty() ? 1 : o.sizes.front());
    const ConvergenceStudy study = theorem1_convergence(model, o.sizes, 2.0, seeds, derive_seed(o.seed, m),
                                                        Complex(1.0, 0.5), o.jobs);
    for (const TrialReport& tr : study.trials) {
      json j = tagged(to_json(tr), r.suite);
      j["model"] = study.model;
      r.trials.push_back(std::move(j));
    }
    const std::string tag = study.model + ": ";
    const ConvergenceRow& last = study.rows.back();
    r.checks.push_back(check(tag + "median L-G residual decreasing in n", study.theorem1_monotone(),
                             last.median_theorem1, 0.0));
    r.checks.push_back(check(tag + "median L-G residual at n=" + std::to_string(last.n) + " < 0.05",
                             last.median_theorem1 < kConvergenceTol, last.median_theorem1, kConvergenceTol));
    r.checks.push_back(check(tag + "median |H - L - LH| decreasing in n", study.relation_monotone(),
                             last.median_relation, 0.0));

    std::size_t below = 0, in_last = 0;
    bool bound_ok = true;
    double min_one_plus_h = std::numeric_limits<double>::infinity();
    for (const TrialReport& tr : study.trials) {
      bound_ok = bound_ok && tr.imh_bound_ok;
      min_one_plus_h = std::min(min_one_plus_h, tr.min_one_plus_h);
      if (tr.n == last.n) {
        ++in_last;
        below += tr.relation_residual.front() < kRelationTol ? 1 : 0;
      }
    }
    const double fraction = in_last ? static_cast<double>(below) / static_cast<double>(in_last) : 0.0;
    r.checks.push_back(check(tag + "fraction of |H - L - LH| < 0.05 at n=" + std::to_string(last.n) + " >= 0.9",
                             fraction >= kRelationFraction, fraction, kRelationFraction));
    r.checks.push_back(check(tag + "Im H lower bound holds on every trial", bound_ok, bound_ok ? 1.0 : 0.0, 1.0));
    r.checks.push_back(check(tag + "min |1 + H| > 0.01", min_one_plus_h > kOnePlusHFloor, min_one_plus_h,
                             kOnePlusHFloor));
  }
  return r;
}

SuiteResult lemma_suite(const SuiteOptions& o) {
  const CovarianceModel model = CovarianceModel::parse(o.model.value_or("identity"), o.n);
  const LemmaSummary s = verify_lemma_bounds(model, o.t_samples, o.trials.value_or(10000), o.seed, o.jobs);
  SuiteResult r;
  r.suite = "lemma";
  for (const LemmaTrial& t : s.per_trial) r.trials.push_back(tagged(to_json(t), r.suite));
  json summary = tagged(to_json(s), r.suite);
  summary["record"] = "summary";
  r.trials.push_back(std::move(summary));
  r.checks.push_back(check("mean Tr E / Tr Sigma within 4 s.e. of 1", s.mean_ok,
                           std::abs(s.mean_trace_ratio - 1.0), 4.0 * s.trace_ratio_se));
  r.checks.push_back(check("Var(Tr E) <= 1.5 * 2 Tr Sigma^2 / T", s.variance_ok, s.variance_trace,
                           1.5 * s.variance_bound));
  return r;
}

SymmetricMatrix random_spd(std::uint64_t seed, Index d) {
  NormalStream rng(seed);
  const MatrixXd b = rng.matrix(d, d);
  return SymmetricMatrix(MatrixXd(b * b.transpose() / static_cast<double>(d) + 0.25 * MatrixXd::Identity(d, d)));
}

SuiteResult stein_suite(const SuiteOptions& o) {
  const std::size_t trials = o.trials.value_or(100000);
  const std::size_t cases = kSteinSeeds * static_cast<std::size_t>(kSteinMaxDim);
  std::vector<std::vector<json>> lines(cases);
  std::vector<std::size_t> scalar_failures(cases, 0), matrix_failures(cases, 0), checks_run(cases, 0);
  parallel_for(cases, o.jobs, [&](std::size_t c) {
    const std::uint64_t seed = derive_seed(o.seed, c / kSteinMaxDim);
    const Index d = static_cast<Index>(c % kSteinMaxDim) + 1;
    const SymmetricMatrix sigma = random_spd(derive_seed(seed, 1000 + static_cast<std::uint64_t>(d)), d);
    std::uint64_t stream = 0;
    for (const std::string& f : stein_functions()) {
      const SteinSummary s = verify_stein(sigma, f, trials, derive_seed(seed, 10 * static_cast<std::uint64_t>(d) + stream++));
      scalar_failures[c] += static_cast<std::size_t>(std::count_if(
          s.checks.begin(), s.checks.end(), [](const SideBySide& x) { return !x.agrees; }));
      checks_run[c] += s.checks.size();
      lines[c].push_back(tagged(to_json(s), "stein"));
    }
    for (const std::string& f : stein_matrix_families()) {
      const SteinMatrixSummary s =
          verify_stein_matrix(sigma, f, trials, derive_seed(seed, 10 * static_cast<std::uint64_t>(d) + stream++));
      matrix_failures[c] += static_cast<std::size_t>(std::count_if(
          s.checks.begin(), s.checks.end(), [](const SideBySide& x) { return !x.agrees; }));
      matrix_failures[c] += s.closed_form && !s.closed_form->agrees ? 1 : 0;
      checks_run[c] += s.checks.size() + (s.closed_form ? 1 : 0);
      lines[c].push_back(tagged(to_json(s), "stein"));
    }
  });

  SuiteResult r;
  r.suite = "stein";
  std::size_t scalar = 0, matrix = 0, total = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    for (json& j : lines[c]) r.trials.push_back(std::move(j));
    scalar += scalar_failures[c];
    matrix += matrix_failures[c];
    total += checks_run[c];
  }
  r.checks.push_back(check("Stein identity, scalar: disagreements beyond 4 s.e. == 0", scalar == 0,
                           static_cast<double>(scalar), 0.0));
  r.checks.push_back(check("Stein identity, matrix: disagreements beyond 4 s.e. == 0", matrix == 0,
                           static_cast<double>(matrix), 0.0));
  r.checks.push_back(check("Stein comparisons run", total > 0, static_cast<double>(total), 1.0));
  return r;
}

SuiteResult concentration_suite(const SuiteOptions& o) {
  const ConcentrationSummary s = verify_concentration(o.trials.value_or(100000), o.seed, 10);
  SuiteResult r;
  r.suite = "concentration";
  for (const ConcentrationCheck& c : s.checks) {
    r.trials.push_back(tagged(to_json(c), r.suite));
    r.checks.push_back(check(c.function + ": Var f <= E|grad f|^2 + 4 s.e.", c.poincare_ok, c.variance.mean,
                             c.grad_sq.mean + kAgreementSigmas * std::hypot(c.variance.se, c.grad_sq.se)));
    double worst = 0.0;
    for (const TailCheck& t : c.tails) worst = std::max(worst, t.probability - t.bound - t.slack);
    r.checks.push_back(check(c.function + ": sub-Gaussian tail at t = k, 2k, 3k", c.tail_ok, worst, 0.0));
  }
  return r;
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

json SuiteResult::summary() const {
  json list = json::array();
  for (const SuiteCheck& c : checks) {
    list.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"threshold", c.threshold}});
  }
  return {{"suite", suite}, {"pass", pass()}, {"checks", list}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "theorem1", "lemma", "stein", "concentration"};
  return names;
}

std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& options) {
  if (name == "all") {
    std::vector<SuiteResult> all;
    for (const std::string& s : suite_names()) all.push_back(run_suite(s, options).front());
    return all;
  }
  if (name == "identities") return {identities_suite(options)};
  if (name == "theorem1") return {theorem1_suite(options)};
  if (name == "lemma") return {lemma_suite(options)};
  if (name == "stein") return {stein_suite(options)};
  if (name == "concentration") return {concentration_suite(options)};
  throw InputError("unknown suite '" + name + "'");
}

}  // namespace rie
