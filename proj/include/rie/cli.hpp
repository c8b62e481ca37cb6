#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rie/spectral.hpp"

namespace rie::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2 };

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t points = 0;
  std::vector<double> values() const;
  static GridSpec parse(const std::string& spec);  // "lo:hi:points"
};

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::string report_path;  // clean: defaults to output_path with a .json extension
  std::string sigma_path;   // simulate: ground-truth Sigma CSV
  double alpha = 0.5;
  std::optional<double> eta_override;
  std::optional<double> q_override;
  bool transpose = false;
  bool center = false;
  bool trace_preserve = false;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  std::size_t jobs = 1;
  std::string model;  // model spec, see CovarianceModel::parse
  Index n = 100;
  std::size_t t_samples = 200;
  std::string suite = "all";
  std::vector<Index> sizes{50, 100, 200, 400};
  std::string grid;
};

/// Full front end: parses argv (CLI flags beat the RIE_SEED environment
/// variable) and dispatches. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_clean(const RunConfig& config, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& config, std::ostream& err);

/// Loads a data CSV as an n x T matrix, honoring transpose and center.
MatrixXd load_data(const RunConfig& config);

}  // namespace rie::cli
