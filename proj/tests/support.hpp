#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "rie/estimators.hpp"
#include "rie/spectral.hpp"

namespace rie::test {

inline EigenSystem spectrum_of(std::initializer_list<double> values) {
  VectorXd v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return eig_covariance(SymmetricMatrix::diagonal(v));
}

inline MatrixXd gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal;
  MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// B B'/n + shift I with Gaussian B.
inline SymmetricMatrix random_spd(std::mt19937_64& rng, Index n, double shift = 0.5) {
  const MatrixXd b = gaussian_matrix(rng, n, n);
  return SymmetricMatrix(MatrixXd(b * b.transpose() / static_cast<double>(n) +
                                  shift * MatrixXd::Identity(n, n)));
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::path(RIE_TEST_TMPDIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace rie::test
