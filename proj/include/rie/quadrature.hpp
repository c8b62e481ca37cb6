#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace rie {

struct QuadratureOptions {
  std::size_t min_points = 2001;  // across the whole interval
  double rel_tol = 1e-10;
  int max_refinements = 16;
};

struct QuadratureResult {
  double value = 0.0;
  std::size_t points = 0;
  bool converged = false;
};

/// Composite trapezoid rule over the pieces delimited by `breaks`
/// (ascending, first and last are the interval ends). Every piece is
/// refined x2 per level; convergence is judged on the Richardson-corrected
/// estimate of successive levels.
QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                           const QuadratureOptions& opts = {});

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

}  // namespace rie
