#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rie/spectral.hpp"

namespace rie {

/// One pass/fail line of a verification suite.
struct SuiteCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct SuiteResult {
  std::string suite;
  std::vector<nlohmann::json> trials;  // emitted as JSON lines, in a fixed order
  std::vector<SuiteCheck> checks;

  bool pass() const;
  nlohmann::json summary() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;  // suite-specific default when unset
  std::size_t jobs = 1;
  std::optional<std::string> model;
  Index n = 100;
  std::size_t t_samples = 200;
  std::vector<Index> sizes{50, 100, 200, 400};
};

/// Suite names accepted by run_suite (besides "all").
const std::vector<std::string>& suite_names();

/// Throws InputError for an unknown suite name.
std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace rie
