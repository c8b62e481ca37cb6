#include "rie/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rie/errors.hpp"

namespace rie {

namespace {

void check_samples(std::size_t t_samples) {
  if (t_samples == 0) throw InputError("sample count T must be >= 1");
}

void check_pole(const EigenSystem& es, Complex z) {
  if (z.imag() != 0.0) return;
  for (Index k = 0; k < es.dim(); ++k) {
    if (std::abs(z.real() - es.eigenvalues(k)) <= kPoleTol) {
      throw PoleError("resolvent evaluated at eigenvalue " + std::to_string(es.eigenvalues(k)) +
                      " on the real axis");
    }
  }
}

}  // namespace

Complex stieltjes_g(const EigenSystem& es, std::size_t t_samples, Complex z) {
  check_samples(t_samples);
  check_pole(es, z);
  Complex sum = 0.0;
  for (Index k = 0; k < es.dim(); ++k) sum += 1.0 / (z - es.eigenvalues(k));
  return sum / static_cast<double>(t_samples);
}

VectorXd projected_variances(const EigenSystem& es, const SymmetricMatrix& sigma) {
  if (sigma.dim() != es.dim()) {
    throw InputError("dimension mismatch: covariance is " + std::to_string(sigma.dim()) +
                     ", eigensystem is " + std::to_string(es.dim()));
  }
  const MatrixXd sigma_u = sigma.matrix() * es.eigenvectors;
  return (es.eigenvectors.cwiseProduct(sigma_u)).colwise().sum().transpose();
}

Complex stieltjes_l(const EigenSystem& es, const VectorXd& projections, std::size_t t_samples,
                    Complex z) {
  check_samples(t_samples);
  if (projections.size() != es.dim()) throw InputError("stieltjes_l: projection length mismatch");
  check_pole(es, z);
  Complex sum = 0.0;
  for (Index k = 0; k < es.dim(); ++k) sum += projections(k) / (z - es.eigenvalues(k));
  return sum / static_cast<double>(t_samples);
}

Complex stieltjes_l(const EigenSystem& es, const SymmetricMatrix& sigma, std::size_t t_samples,
                    Complex z) {
  return stieltjes_l(es, projected_variances(es, sigma), t_samples, z);
}

Complex h_functional(const EigenSystem& es, std::size_t t_samples, Complex z) {
  check_samples(t_samples);
  check_pole(es, z);
  Complex sum = 0.0;
  for (Index k = 0; k < es.dim(); ++k) sum += es.eigenvalues(k) / (z - es.eigenvalues(k));
  return sum / static_cast<double>(t_samples);
}

ResolventPoint evaluate_resolvent(const EigenSystem& es, std::size_t t_samples, Complex z,
                                  const VectorXd* projections) {
  ResolventPoint p;
  p.z = z;
  p.t_samples = t_samples;
  p.q = static_cast<double>(es.dim()) / static_cast<double>(t_samples);
  p.g = stieltjes_g(es, t_samples, z);
  p.h = h_functional(es, t_samples, z);
  if (projections != nullptr) p.l = stieltjes_l(es, *projections, t_samples, z);
  return p;
}

Complex theorem1_rhs(Complex g, Complex z, double q) {
  const Complex denom = 1.0 - q + z * g;
  const double modulus = std::abs(denom);
  if (modulus <= 1e-12) {
    throw SingularError("theorem1_rhs: |1 - q + z g| vanishes", modulus);
  }
  return 1.0 - 1.0 / denom;
}

double cleaned_eigenvalue(double lambda, Complex g_at_lambda, double q) {
  if (lambda < 0.0) {
    throw InputError("cleaned_eigenvalue: lambda must be >= 0, got " + std::to_string(lambda));
  }
  if (lambda == 0.0) return 0.0;
  const Complex denom = 1.0 - q + lambda * g_at_lambda;
  const double modulus = std::abs(denom);
  if (modulus < 1e-14) {
    throw SingularError("cleaned_eigenvalue: |1 - q + lambda G| vanishes", modulus);
  }
  return lambda / (modulus * modulus);
}

double rn_ratio_oracle(const EigenSystem& es, const SymmetricMatrix& sigma, std::size_t t_samples,
                       Index k, std::optional<double> epsilon, double eta) {
  check_samples(t_samples);
  if (k < 0 || k >= es.dim()) throw InputError("rn_ratio_oracle: index out of range");
  if (!(eta > 0.0)) throw InputError("rn_ratio_oracle: eta must be > 0");

  const double center = es.eigenvalues(k);
  double gap = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < es.dim(); ++j) {
    const double d = std::abs(es.eigenvalues(j) - center);
    if (d > kClusterTol) gap = std::min(gap, d);
  }
  const double eps = epsilon.value_or(std::isfinite(gap) ? kDefaultWindowFraction * gap
                                                         : std::max(1.0, std::abs(center)));
  if (!(eps > 0.0)) throw InputError("rn_ratio_oracle: epsilon must be > 0");
  if (gap <= eps) {
    throw AmbiguousIntervalError("rn_ratio_oracle: window of half-width " + std::to_string(eps) +
                                 " around " + std::to_string(center) +
                                 " contains a distinct eigenvalue at distance " +
                                 std::to_string(gap));
  }

  const VectorXd proj = projected_variances(es, sigma);
  // -Im of the (1/T)-free sums; the 1/T and the sign cancel in the ratio.
  auto im_l = [&](double x) {
    double s = 0.0;
    for (Index j = 0; j < es.dim(); ++j) {
      const double d = x - es.eigenvalues(j);
      s += proj(j) * eta / (d * d + eta * eta);
    }
    return s;
  };
  auto im_g = [&](double x) {
    double s = 0.0;
    for (Index j = 0; j < es.dim(); ++j) {
      const double d = x - es.eigenvalues(j);
      s += eta / (d * d + eta * eta);
    }
    return s;
  };

  // Pieces grow geometrically away from the peak so each one is resolved.
  std::vector<double> offsets{0.0};
  for (double w = eta; w < eps; w *= 2.0) offsets.push_back(w);
  offsets.push_back(eps);
  std::vector<double> breaks;
  breaks.reserve(2 * offsets.size());
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) breaks.push_back(center - *it);
  for (std::size_t i = 1; i < offsets.size(); ++i) breaks.push_back(center + offsets[i]);

  const QuadratureResult num = integrate(im_l, breaks);
  const QuadratureResult den = integrate(im_g, breaks);
  if (den.value == 0.0) throw SingularError("rn_ratio_oracle: vanishing Im G integral", 0.0);
  return num.value / den.value;
}

double SignedMeasureGrid::mass(double a, double b) const {
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    if (grid[j] >= a && grid[j + 1] <= b) {
      total += 0.5 * (density[j] + density[j + 1]) * (grid[j + 1] - grid[j]);
    }
  }
  return total;
}

SignedMeasureGrid stieltjes_invert(const StieltjesFn& transform, std::span<const double> grid,
                                   double eta) {
  if (!(eta > 0.0)) throw InputError("stieltjes_invert: eta must be > 0");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1])) throw InputError("stieltjes_invert: grid must be strictly ascending");
  }
  SignedMeasureGrid out;
  out.eta = eta;
  out.grid.assign(grid.begin(), grid.end());
  out.density.reserve(grid.size());
  for (double x : grid) out.density.push_back(-std::imag(transform(Complex(x, eta))) / std::numbers::pi);
  return out;
}

QuadratureResult inverted_mass(const StieltjesFn& transform, double a, double b, double eta,
                               const QuadratureOptions& opts) {
  if (!(eta > 0.0)) throw InputError("inverted_mass: eta must be > 0");
  if (!(b > a)) throw InputError("inverted_mass: need a < b");
  auto density = [&](double x) { return -std::imag(transform(Complex(x, eta))) / std::numbers::pi; };
  return integrate(density, a, b, opts);
}

}  // namespace rie
