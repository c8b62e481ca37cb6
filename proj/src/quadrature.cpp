#include "rie/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rie/errors.hpp"

namespace rie {

QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                           const QuadratureOptions& opts) {
  if (breaks.size() < 2) throw InputError("integrate: need at least two break points");
  if (!std::is_sorted(breaks.begin(), breaks.end())) {
    throw InputError("integrate: break points must be ascending");
  }
  const std::size_t pieces = breaks.size() - 1;
  std::size_t m = std::max<std::size_t>(1, (opts.min_points + pieces - 2) / pieces);

  // Per-piece running sums: endpoints weighted 1/2, interior weight 1.
  std::vector<double> sums(pieces, 0.0);
  std::size_t evaluations = 0;
  for (std::size_t p = 0; p < pieces; ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double h = (b - a) / static_cast<double>(m);
    double s = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i < m; ++i) s += f(a + static_cast<double>(i) * h);
    sums[p] = s;
    evaluations += m + 1;
  }
  auto trapezoid = [&](std::size_t intervals) {
    double total = 0.0;
    for (std::size_t p = 0; p < pieces; ++p) {
      total += sums[p] * (breaks[p + 1] - breaks[p]) / static_cast<double>(intervals);
    }
    return total;
  };

  double coarse = trapezoid(m);
  double previous = coarse;
  bool have_previous = false;
  QuadratureResult result;
  for (int level = 0; level < opts.max_refinements; ++level) {
    for (std::size_t p = 0; p < pieces; ++p) {
      const double a = breaks[p];
      const double h = (breaks[p + 1] - a) / static_cast<double>(m);
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
      sums[p] += s;
      evaluations += m;
    }
    m *= 2;
    const double fine = trapezoid(m);
    const double extrapolated = (4.0 * fine - coarse) / 3.0;
    coarse = fine;
    result.value = extrapolated;
    result.points = evaluations;
    if (have_previous &&
        std::abs(extrapolated - previous) <= opts.rel_tol * std::abs(extrapolated)) {
      result.converged = true;
      return result;
    }
    if (have_previous && extrapolated == 0.0 && previous == 0.0) {
      result.converged = true;
      return result;
    }
    previous = extrapolated;
    have_previous = true;
  }
  return result;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  const double breaks[2] = {a, b};
  return integrate(f, std::span<const double>(breaks, 2), opts);
}

}  // namespace rie
