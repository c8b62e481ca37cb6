#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rie/spectral.hpp"

namespace rie {

namespace model {

struct Identity {};

struct Diagonal {
  std::vector<double> values;
};

/// base * I + sum_i strengths[i] * v_i v_i'. An empty `directions` matrix
/// means the canonical basis vectors e_1, e_2, ...
struct Spiked {
  double base = 1.0;
  std::vector<double> strengths;
  MatrixXd directions;
};

/// Entry (i, j) = rho^{|i - j|}.
struct Toeplitz {
  double rho = 0.0;
};

struct FromFile {
  std::string path;
};

}  // namespace model

struct CovarianceModel {
  std::variant<model::Identity, model::Diagonal, model::Spiked, model::Toeplitz, model::FromFile> kind;
  Index dim = 1;

  /// Parses "identity", "diag:1,2,3", "toeplitz:0.5", "spiked:10,5[;base=1]"
  /// or "file:<path>". `dim` is ignored for diag (taken from the list) and
  /// for file models (taken from the file).
  static CovarianceModel parse(std::string_view spec, Index dim);
  std::string describe() const;
};

SymmetricMatrix make_sigma(const CovarianceModel& model);

/// Scale quantities that the large-n results are stated in terms of.
struct RegimeStats {
  double operator_norm = 0.0;
  double mean_eigenvalue = 0.0;  // Tr Sigma / n
  double trace = 0.0;
  double trace_of_square = 0.0;  // Tr Sigma^2
  /// ||Sigma|| / (Tr Sigma / n); bounded across n in the intended regime.
  double spread_ratio() const { return mean_eigenvalue > 0 ? operator_norm / mean_eigenvalue : 0.0; }
};

RegimeStats regime_stats(const SymmetricMatrix& sigma);

/// Sigma together with its PSD square root, computed once and reused per trial.
struct GroundTruth {
  SymmetricMatrix sigma;
  SymmetricMatrix root;
  RegimeStats stats;

  explicit GroundTruth(SymmetricMatrix s);
};

}  // namespace rie
