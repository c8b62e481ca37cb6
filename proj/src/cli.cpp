#include "rie/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "rie/csv.hpp"
#include "rie/errors.hpp"
#include "rie/estimators.hpp"
#include "rie/json_io.hpp"
#include "rie/models.hpp"
#include "rie/simulation.hpp"
#include "rie/suites.hpp"
#include "rie/transforms.hpp"

namespace rie::cli {

using nlohmann::json;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path);
  out << text;
  if (!out) throw FileError("write failed for " + path);
}

std::string default_report_path(const std::string& output) {
  std::filesystem::path p(output);
  p.replace_extension(".json");
  return p.string();
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("RIE_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') throw InputError(std::string("RIE_SEED is not an integer: ") + env);
  return v;
}

void validate_cleaning(const RunConfig& c) {
  if (c.eta_override) {
    if (!(*c.eta_override > 0.0)) throw InputError("--eta must be > 0");
  } else if (!(c.alpha > 0.0 && c.alpha < 1.0)) {
    throw InputError("--alpha must lie in (0, 1)");
  }
}

}  // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> v;
  v.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    v.push_back(points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return v;
}

GridSpec GridSpec::parse(const std::string& spec) {
  std::istringstream in(spec);
  GridSpec g;
  char c1 = 0, c2 = 0;
  long long pts = -1;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> pts) || c1 != ':' || c2 != ':' || pts < 0 || !in.eof()) {
    throw InputError("--grid must be lo:hi:points, got '" + spec + "'");
  }
  if (pts > 1 && !(g.hi > g.lo)) throw InputError("--grid needs lo < hi");
  g.points = static_cast<std::size_t>(pts);
  return g;
}

MatrixXd load_data(const RunConfig& config) {
  MatrixXd x = read_csv_matrix(config.input_path);
  if (x.size() == 0) throw InputError(config.input_path + ": no data");
  if (config.transpose) x.transposeInPlace();
  if (config.center) x = center_rows(x);
  return x;
}

int cmd_clean(const RunConfig& config, std::ostream& err) {
  validate_cleaning(config);
  if (config.output_path.empty()) throw InputError("clean: --out is required");
  const MatrixXd x = load_data(config);
  const Index n = x.rows();
  const auto t = static_cast<std::size_t>(x.cols());
  if (static_cast<std::size_t>(n) > t) {
    err << "warning: n = " << n << " exceeds T = " << t << "; " << (static_cast<std::size_t>(n) - t)
        << " eigenvalues are structurally zero\n";
  }

  const SymmetricMatrix e = empirical_covariance(x);
  const EigenSystem es = eig_covariance(e);
  CleaningOptions opts;
  opts.alpha = config.alpha;
  opts.eta = config.eta_override;
  opts.q = config.q_override;
  opts.trace_preserve = config.trace_preserve;
  const CleanedSpectrum cleaned = lp_clean(es, t, opts);
  const SymmetricMatrix out = assemble(es, cleaned);

  write_csv_matrix(config.output_path, out.matrix());
  json report{{"n", n},
              {"T", t},
              {"q", cleaned.q},
              {"eta", cleaned.eta},
              {"alpha", config.eta_override ? json(nullptr) : json(config.alpha)},
              {"centered", config.center},
              {"trace_preserve", config.trace_preserve},
              {"eigenvalues", to_json(es.eigenvalues)},
              {"cleaned_eigenvalues", to_json(cleaned.cleaned)},
              {"trace_before", e.trace()},
              {"trace_after", out.trace()},
              {"degenerate_clusters", count_degenerate_clusters(es.eigenvalues)}};
  write_text(config.report_path.empty() ? default_report_path(config.output_path) : config.report_path,
             report.dump(2) + "\n");
  return kSuccess;
}

int cmd_simulate(const RunConfig& config, std::ostream&) {
  if (config.model.empty()) throw InputError("simulate: --model is required");
  if (config.output_path.empty()) throw InputError("simulate: --out is required");
  if (config.t_samples < 1) throw InputError("simulate: --T must be >= 1");
  const CovarianceModel model = CovarianceModel::parse(config.model, config.n);
  const GroundTruth truth(make_sigma(model));
  const MatrixXd x = sample_gaussian(truth, config.t_samples, config.seed);
  write_csv_matrix(config.output_path, config.transpose ? MatrixXd(x.transpose()) : x);
  if (!config.sigma_path.empty()) write_csv_matrix(config.sigma_path, truth.sigma.matrix());
  return kSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
  SuiteOptions opts;
  opts.seed = config.seed;
  opts.trials = config.trials;
  opts.jobs = config.jobs;
  if (!config.model.empty()) opts.model = config.model;
  opts.n = config.n;
  opts.t_samples = config.t_samples;
  opts.sizes = config.sizes;
  const std::vector<SuiteResult> results = run_suite(config.suite, opts);

  const std::string prefix = config.output_path.empty() ? "verify" : config.output_path;
  std::ostringstream lines;
  json summary{{"seed", config.seed}, {"jobs", config.jobs}, {"suites", json::array()}};
  bool pass = true;
  for (const SuiteResult& r : results) {
    for (const json& j : r.trials) lines << j.dump() << '\n';
    summary["suites"].push_back(r.summary());
    pass = pass && r.pass();
    for (const SuiteCheck& c : r.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << r.suite << ": " << c.name << " (value " << c.value << ")\n";
    }
  }
  summary["pass"] = pass;
  write_text(prefix + ".jsonl", lines.str());
  write_text(prefix + ".summary.json", summary.dump(2) + "\n");
  return pass ? kSuccess : kVerificationFailed;
}

int cmd_spectrum(const RunConfig& config, std::ostream&) {
  if (config.input_path.empty() == config.model.empty()) {
    throw InputError("spectrum: give exactly one of --input or --model");
  }
  if (config.output_path.empty()) throw InputError("spectrum: --out is required");
  validate_cleaning(config);
  const GridSpec grid = GridSpec::parse(config.grid.empty() ? "0:4:401" : config.grid);

  MatrixXd x;
  if (!config.input_path.empty()) {
    x = load_data(config);
  } else {
    x = sample_gaussian(GroundTruth(make_sigma(CovarianceModel::parse(config.model, config.n))),
                        config.t_samples, config.seed);
  }
  const auto t = static_cast<std::size_t>(x.cols());
  const EigenSystem es = eig_covariance(empirical_covariance(x));
  const double eta = config.eta_override.value_or(std::pow(static_cast<double>(t), -config.alpha));

  const std::vector<double> points = grid.values();
  const SignedMeasureGrid density =
      stieltjes_invert([&](Complex z) { return stieltjes_g(es, t, z); }, points, eta);
  MatrixXd table(static_cast<Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    table(static_cast<Index>(i), 0) = density.grid[i];
    table(static_cast<Index>(i), 1) = density.density[i];
  }
  write_csv_matrix(config.output_path, table);
  return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotationally invariant covariance cleaning and verification"};
  app.require_subcommand(1);
  RunConfig c;
  std::optional<std::uint64_t> seed_flag;
  std::optional<double> eta, q;
  std::optional<std::size_t> trials;

  auto add_cleaning = [&](CLI::App* sub) {
    sub->add_option("--alpha", c.alpha, "Exponent in eta = T^-alpha")->capture_default_str();
    sub->add_option("--eta", eta, "Spectral resolution; overrides --alpha");
    sub->add_flag("--transpose", c.transpose, "Rows are observations instead of variables");
    sub->add_flag("--center", c.center, "Subtract per-variable sample means (divisor stays T)");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--model", c.model, "identity | diag:a,b,.. | toeplitz:rho | spiked:s1,..[;base=b] | file:path");
    sub->add_option("--n", c.n, "Dimension")->capture_default_str();
    sub->add_option("--T", c.t_samples, "Number of observations")->capture_default_str();
    sub->add_option("--seed", seed_flag, "Seed (falls back to RIE_SEED)");
  };

  CLI::App* clean = app.add_subcommand("clean", "Clean the covariance of a data CSV");
  clean->add_option("input", c.input_path, "Data CSV (rows = variables)")->required();
  clean->add_option("--out", c.output_path, "Cleaned covariance CSV")->required();
  clean->add_option("--report", c.report_path, "JSON report (default: <out>.json)");
  clean->add_option("--q", q, "Aspect ratio override");
  clean->add_flag("--trace-preserve", c.trace_preserve, "Rescale cleaned eigenvalues to keep Tr E");
  add_cleaning(clean);

  CLI::App* simulate = app.add_subcommand("simulate", "Sample Gaussian data from a covariance model");
  add_sampling(simulate);
  simulate->add_option("--out", c.output_path, "Data CSV")->required();
  simulate->add_option("--sigma-out", c.sigma_path, "Ground-truth covariance CSV");
  simulate->add_flag("--transpose", c.transpose, "Write rows = observations");

  CLI::App* verify = app.add_subcommand("verify", "Run Monte Carlo verification suites");
  verify->add_option("--suite", c.suite, "identities | theorem1 | lemma | stein | concentration | all")
      ->capture_default_str();
  verify->add_option("--trials", trials, "Trials / seeds per suite");
  verify->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
  verify->add_option("--sizes", c.sizes, "Dimensions for the theorem1 convergence study");
  verify->add_option("--out", c.output_path, "Output prefix for .jsonl and .summary.json");
  add_sampling(verify);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Emit the smoothed spectral density on a grid");
  spectrum->add_option("--input", c.input_path, "Data CSV");
  spectrum->add_option("--grid", c.grid, "lo:hi:points");
  spectrum->add_option("--out", c.output_path, "Density CSV (x,density)")->required();
  add_cleaning(spectrum);
  add_sampling(spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    c.eta_override = eta;
    c.q_override = q;
    c.trials = trials;
    c.seed = seed_flag ? *seed_flag : seed_from_env(c.seed);
    if (c.jobs < 1) throw InputError("--jobs must be >= 1");
    if (clean->parsed()) return c.command = "clean", cmd_clean(c, err);
    if (simulate->parsed()) return c.command = "simulate", cmd_simulate(c, err);
    if (verify->parsed()) return c.command = "verify", cmd_verify(c, out, err);
    if (spectrum->parsed()) return c.command = "spectrum", cmd_spectrum(c, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace rie::cli
