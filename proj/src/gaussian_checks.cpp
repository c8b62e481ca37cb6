#include "rie/gaussian_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rie/errors.hpp"
#include "rie/models.hpp"
#include "rie/random.hpp"

namespace rie {

namespace {

using Eigen::MatrixXcd;

// Welford accumulator.
class Running {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  MeanEstimate estimate() const {
    MeanEstimate e;
    e.mean = mean_;
    e.se = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
    return e;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Tracks lhs, rhs and lhs - rhs over the same draws.
struct PairedAccumulator {
  Running lhs, rhs, diff;
  void add(double l, double r) {
    lhs.add(l);
    rhs.add(r);
    diff.add(l - r);
  }
  SideBySide finish(std::string label) const {
    SideBySide s;
    s.label = std::move(label);
    s.lhs = lhs.estimate();
    s.rhs = rhs.estimate();
    const MeanEstimate d = diff.estimate();
    s.diff = d.mean;
    s.diff_se = d.se;
    const double floor = 1e-12 * std::max({1.0, std::abs(s.lhs.mean), std::abs(s.rhs.mean)});
    s.agrees = std::abs(s.diff) <= kAgreementSigmas * s.diff_se + floor;
    return s;
  }
};

VectorXd alternating_vector(Index d) {
  VectorXd a(d);
  for (Index k = 0; k < d; ++k) a(k) = std::pow(-0.5, static_cast<double>(k));
  return a;
}

MatrixXd fixed_symmetric(Index d) {
  MatrixXd a(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) a(i, j) = i == j ? 1.0 : 0.5 / (1.0 + static_cast<double>(std::abs(i - j)));
  }
  return a;
}

// Scalar test function with its gradient.
struct ScalarFn {
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> gradient;
  double lipschitz = std::numeric_limits<double>::infinity();
};

ScalarFn stein_scalar(std::string_view id, Index d) {
  const VectorXd a = alternating_vector(d);
  if (id == "quadratic") {
    const MatrixXd m = fixed_symmetric(d);
    return {[m](const VectorXd& x) { return x.dot(m * x); },
            [m](const VectorXd& x) -> VectorXd { return 2.0 * m * x; }};
  }
  if (id == "smooth_bounded") {
    return {[a](const VectorXd& x) { return std::tanh(a.dot(x) + 0.5); },
            [a](const VectorXd& x) -> VectorXd {
              const double c = std::cosh(a.dot(x) + 0.5);
              return a / (c * c);
            }};
  }
  if (id == "cubic") {
    return {[a, d](const VectorXd& x) {
              const double s = a.dot(x);
              return s * s * s + x(0) * x(d - 1);
            },
            [a, d](const VectorXd& x) -> VectorXd {
              const double s = a.dot(x);
              VectorXd g = 3.0 * s * s * a;
              g(0) += x(d - 1);
              g(d - 1) += x(0);
              return g;
            }};
  }
  throw InputError("unknown Stein test function '" + std::string(id) + "'");
}

ScalarFn concentration_scalar(std::string_view id, Index d) {
  if (id == "linear") {
    const VectorXd a = alternating_vector(d);
    return {[a](const VectorXd& x) { return a.dot(x); }, [a](const VectorXd&) -> VectorXd { return a; },
            a.norm()};
  }
  if (id == "constant") {
    return {[](const VectorXd&) { return 1.0; },
            [d](const VectorXd&) -> VectorXd { return VectorXd::Zero(d); }, 0.0};
  }
  if (id == "max_coordinate") {
    return {[](const VectorXd& x) { return x.maxCoeff(); },
            [d](const VectorXd& x) -> VectorXd {
              Index arg = 0;
              x.maxCoeff(&arg);
              return VectorXd::Unit(d, arg);
            },
            1.0};
  }
  if (id == "euclidean_norm") {
    return {[](const VectorXd& x) { return x.norm(); },
            [d](const VectorXd& x) -> VectorXd {
              const double r = x.norm();
              return r > 0.0 ? VectorXd(x / r) : VectorXd(VectorXd::Zero(d));
            },
            1.0};
  }
  if (id == "smoothed_abs") {
    return {[](const VectorXd& x) { return std::sqrt(x(0) * x(0) + 1.0); },
            [d](const VectorXd& x) -> VectorXd {
              VectorXd g = VectorXd::Zero(d);
              g(0) = x(0) / std::sqrt(x(0) * x(0) + 1.0);
              return g;
            },
            1.0};
  }
  throw InputError("unknown concentration test function '" + std::string(id) + "'");
}

void check_trials(std::size_t trials) {
  if (trials < 2) throw InputError("Monte Carlo checks need at least 2 trials");
}

}  // namespace

const std::vector<std::string>& stein_functions() {
  static const std::vector<std::string> ids{"linear", "quadratic", "smooth_bounded", "cubic"};
  return ids;
}

SteinSummary verify_stein(const SymmetricMatrix& sigma, std::string_view function,
                          std::size_t trials, std::uint64_t seed) {
  check_trials(trials);
  const Index d = sigma.dim();
  const bool linear = function == "linear";
  const ScalarFn f = linear ? ScalarFn{} : stein_scalar(function, d);
  const MatrixXd root = sym_sqrt(sigma).matrix();
  const MatrixXd& s = sigma.matrix();

  // linear: one accumulator per (i0, j); otherwise one per i0.
  std::vector<PairedAccumulator> acc(static_cast<std::size_t>(linear ? d * d : d));
  NormalStream normal(seed);
  VectorXd y(d);
  for (std::size_t t = 0; t < trials; ++t) {
    for (Index k = 0; k < d; ++k) y(k) = normal();
    const VectorXd x = root * y;
    if (linear) {
      for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) acc[static_cast<std::size_t>(i * d + j)].add(x(i) * x(j), s(i, j));
      }
    } else {
      const double fx = f.value(x);
      const VectorXd rhs = s * f.gradient(x);
      for (Index i = 0; i < d; ++i) acc[static_cast<std::size_t>(i)].add(x(i) * fx, rhs(i));
    }
  }

  SteinSummary out;
  out.function = std::string(function);
  out.dim = d;
  out.trials = trials;
  out.seed = seed;
  out.ok = true;
  if (linear) out.second_moments.resize(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < (linear ? d : 1); ++j) {
      const std::string label = linear ? "i0=" + std::to_string(i) + ",f=x_" + std::to_string(j)
                                       : "i0=" + std::to_string(i);
      SideBySide c = acc[static_cast<std::size_t>(linear ? i * d + j : i)].finish(label);
      if (linear) out.second_moments(i, j) = c.lhs.mean;
      out.ok = out.ok && c.agrees;
      out.checks.push_back(std::move(c));
    }
  }
  return out;
}

const std::vector<std::string>& stein_matrix_families() {
  static const std::vector<std::string> ids{"identity", "constant", "resolvent"};
  return ids;
}

MatrixXcd rank_one_resolvent(const VectorXd& x, Complex z) {
  // Sherman-Morrison: (z - xx')^{-1} = (I + xx'/(z - |x|^2)) / z.
  const Index d = x.size();
  const Complex scale = 1.0 / (z - x.squaredNorm());
  MatrixXcd m = MatrixXcd::Identity(d, d);
  m += scale * (x * x.transpose()).cast<Complex>();
  return m / z;
}

MatrixXcd central_difference(const std::function<MatrixXcd(const VectorXd&)>& f, const VectorXd& x,
                             Index k) {
  const double h = 1e-5 * std::max(1.0, std::abs(x(k)));
  VectorXd plus = x;
  VectorXd minus = x;
  plus(k) += h;
  minus(k) -= h;
  return (f(plus) - f(minus)) / (plus(k) - minus(k));
}

SteinMatrixSummary verify_stein_matrix(const SymmetricMatrix& sigma, std::string_view family,
                                       std::size_t trials, std::uint64_t seed, Complex z) {
  check_trials(trials);
  const Index d = sigma.dim();
  const MatrixXd& s = sigma.matrix();
  const MatrixXcd s_c = s.cast<Complex>();

  bool constant = true;
  MatrixXd fixed;
  std::function<MatrixXcd(const VectorXd&)> f;
  if (family == "identity") {
    fixed = MatrixXd::Identity(d, d);
  } else if (family == "constant") {
    fixed = fixed_symmetric(d);
  } else if (family == "resolvent") {
    if (std::abs(z.imag()) < 1.0) {
      throw InputError("verify_stein_matrix: resolvent family needs |Im z| >= 1");
    }
    constant = false;
    f = [z](const VectorXd& x) { return rank_one_resolvent(x, z); };
  } else {
    throw InputError("unknown matrix family '" + std::string(family) + "'");
  }

  const MatrixXd root = sym_sqrt(sigma).matrix();
  NormalStream normal(seed);
  VectorXd y(d);
  PairedAccumulator re, im;
  Running closed_lhs;
  const double closed_value = constant ? (fixed * s).trace() : 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (Index k = 0; k < d; ++k) y(k) = normal();
    const VectorXd x = root * y;
    if (constant) {
      const double lhs = x.dot(fixed * x);
      re.add(lhs, closed_value);  // derivative term vanishes
      closed_lhs.add(lhs);
      continue;
    }
    const MatrixXcd fx = f(x);
    const VectorXd& xr = x;
    const Complex lhs = (xr.cast<Complex>().transpose() * fx * xr.cast<Complex>())(0, 0);
    Complex rhs = (s_c * fx).trace();
    for (Index k = 0; k < d; ++k) {
      const MatrixXcd dk = central_difference(f, x, k);
      rhs += (s_c * (dk * xr.cast<Complex>()))(k);
    }
    re.add(lhs.real(), rhs.real());
    im.add(lhs.imag(), rhs.imag());
  }

  SteinMatrixSummary out;
  out.family = std::string(family);
  out.dim = d;
  out.trials = trials;
  out.seed = seed;
  out.z = z;
  out.checks.push_back(re.finish("real"));
  if (!constant) out.checks.push_back(im.finish("imag"));
  if (constant) {
    SideBySide c;
    c.label = "closed_form_trace";
    c.lhs = closed_lhs.estimate();
    c.rhs = MeanEstimate{closed_value, 0.0};
    c.diff = c.lhs.mean - closed_value;
    c.diff_se = c.lhs.se;
    c.agrees = std::abs(c.diff) <= kAgreementSigmas * c.diff_se + 1e-12 * std::max(1.0, std::abs(closed_value));
    out.closed_form = c;
  }
  out.ok = std::all_of(out.checks.begin(), out.checks.end(), [](const SideBySide& c) { return c.agrees; }) &&
           (!out.closed_form || out.closed_form->agrees);
  return out;
}

const std::vector<std::string>& concentration_functions() {
  static const std::vector<std::string> ids{"linear", "constant", "max_coordinate", "euclidean_norm",
                                            "smoothed_abs"};
  return ids;
}

ConcentrationCheck verify_concentration(std::string_view function, Index dim, std::size_t trials,
                                        std::uint64_t seed) {
  check_trials(trials);
  if (dim < 1) throw InputError("verify_concentration: dim must be >= 1");
  const ScalarFn f = concentration_scalar(function, dim);
  NormalStream normal(seed);
  std::vector<double> values(trials);
  Running grad_sq;
  VectorXd x(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    for (Index k = 0; k < dim; ++k) x(k) = normal();
    values[t] = f.value(x);
    grad_sq.add(f.gradient(x).squaredNorm());
  }

  const double n = static_cast<double>(trials);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  m2 /= n;
  m4 /= n;

  ConcentrationCheck out;
  out.function = std::string(function);
  out.dim = dim;
  out.trials = trials;
  out.seed = seed;
  out.lipschitz = f.lipschitz;
  out.variance.mean = m2 * n / (n - 1.0);
  out.variance.se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  out.grad_sq = grad_sq.estimate();
  const double combined = std::hypot(out.variance.se, out.grad_sq.se);
  out.poincare_ok = out.variance.mean <= out.grad_sq.mean + kAgreementSigmas * combined;

  out.tail_ok = true;
  if (out.lipschitz > 0.0) {
    for (int mult = 1; mult <= 3; ++mult) {
      TailCheck tc;
      tc.t = mult * out.lipschitz;
      std::size_t hits = 0;
      for (double v : values) hits += std::abs(v - mean) >= tc.t ? 1 : 0;
      tc.probability = static_cast<double>(hits) / n;
      tc.bound = std::min(1.0, 2.0 * std::exp(-tc.t * tc.t / (2.0 * out.lipschitz * out.lipschitz)));
      tc.slack = kAgreementSigmas * std::sqrt(tc.bound * (1.0 - tc.bound) / n);
      tc.ok = tc.probability <= tc.bound + tc.slack;
      out.tail_ok = out.tail_ok && tc.ok;
      out.tails.push_back(tc);
    }
  }
  return out;
}

ConcentrationSummary verify_concentration(std::size_t trials, std::uint64_t seed, Index dim) {
  ConcentrationSummary s;
  s.trials = trials;
  s.seed = seed;
  s.ok = true;
  std::uint64_t index = 0;
  for (const std::string& id : concentration_functions()) {
    s.checks.push_back(verify_concentration(id, dim, trials, derive_seed(seed, index++)));
    s.ok = s.ok && s.checks.back().ok();
  }
  return s;
}

}  // namespace rie
