#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace rie {

/// SplitMix64 mix of (master, index); per-trial seeds come from here.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Standard normal stream: mt19937_64 feeding Box-Muller. Both pieces have
/// fixed, platform-independent definitions (unlike std::normal_distribution),
/// so a seed pins the stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double operator()();
  /// Uniform on (0, 1].
  double uniform();
  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rie
