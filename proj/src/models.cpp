#include "rie/models.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rie/csv.hpp"
#include "rie/errors.hpp"

namespace rie {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double parse_double(std::string_view s, std::string_view what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("model spec: bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

std::vector<double> parse_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

CovarianceModel CovarianceModel::parse(std::string_view spec, Index dim) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  CovarianceModel m;
  m.dim = dim;
  if (name == "identity") {
    m.kind = model::Identity{};
  } else if (name == "diag" || name == "diagonal") {
    model::Diagonal d{parse_list(args, spec)};
    m.dim = static_cast<Index>(d.values.size());
    m.kind = std::move(d);
  } else if (name == "toeplitz") {
    m.kind = model::Toeplitz{parse_double(args, spec)};
  } else if (name == "spiked") {
    model::Spiked s;
    std::string_view strengths = args;
    if (const auto semi = args.find(';'); semi != std::string_view::npos) {
      strengths = args.substr(0, semi);
      std::string_view opt = args.substr(semi + 1);
      if (opt.substr(0, 5) != "base=") throw InputError("model spec: unknown option in " + std::string(spec));
      s.base = parse_double(opt.substr(5), spec);
    }
    s.strengths = parse_list(strengths, spec);
    m.kind = std::move(s);
  } else if (name == "file") {
    if (args.empty()) throw InputError("model spec: file model needs a path");
    m.kind = model::FromFile{std::string(args)};
  } else {
    throw InputError("model spec: unknown model '" + std::string(name) + "'");
  }
  if (m.dim < 1 && !std::holds_alternative<model::FromFile>(m.kind)) {
    throw InputError("model spec: dimension must be >= 1");
  }
  return m;
}

std::string CovarianceModel::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const model::Identity&) { os << "identity"; },
                 [&](const model::Diagonal& d) {
                   os << "diag:";
                   for (std::size_t i = 0; i < d.values.size(); ++i) os << (i ? "," : "") << d.values[i];
                 },
                 [&](const model::Spiked& s) {
                   os << "spiked:";
                   for (std::size_t i = 0; i < s.strengths.size(); ++i) os << (i ? "," : "") << s.strengths[i];
                   if (s.base != 1.0) os << ";base=" << s.base;
                 },
                 [&](const model::Toeplitz& t) { os << "toeplitz:" << t.rho; },
                 [&](const model::FromFile& f) { os << "file:" << f.path; },
             },
             kind);
  return os.str();
}

SymmetricMatrix make_sigma(const CovarianceModel& m) {
  return std::visit(
      Overloaded{
          [&](const model::Identity&) { return SymmetricMatrix::identity(m.dim); },
          [&](const model::Diagonal& d) {
            if (d.values.empty()) throw InputError("diagonal model: no values");
            VectorXd v = Eigen::Map<const VectorXd>(d.values.data(), static_cast<Index>(d.values.size()));
            if (v.minCoeff() < 0.0) throw InputError("diagonal model: negative variance");
            return SymmetricMatrix::diagonal(v);
          },
          [&](const model::Toeplitz& t) {
            if (!(std::abs(t.rho) < 1.0)) throw InputError("toeplitz model: need |rho| < 1");
            MatrixXd s(m.dim, m.dim);
            for (Index i = 0; i < m.dim; ++i) {
              for (Index j = 0; j < m.dim; ++j) s(i, j) = std::pow(t.rho, static_cast<double>(std::abs(i - j)));
            }
            return SymmetricMatrix(std::move(s));
          },
          [&](const model::Spiked& s) {
            if (s.base < 0.0) throw InputError("spiked model: base must be >= 0");
            const Index r = static_cast<Index>(s.strengths.size());
            MatrixXd v = s.directions;
            if (v.size() == 0) {
              if (r > m.dim) throw InputError("spiked model: more spikes than dimensions");
              v = MatrixXd::Identity(m.dim, r);
            }
            if (v.rows() != m.dim || v.cols() != r) {
              throw InputError("spiked model: directions must be " + std::to_string(m.dim) + "x" +
                               std::to_string(r));
            }
            if ((v.transpose() * v - MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-8) {
              throw InputError("spiked model: spike directions are not orthonormal");
            }
            VectorXd strengths = Eigen::Map<const VectorXd>(s.strengths.data(), r);
            MatrixXd out = s.base * MatrixXd::Identity(m.dim, m.dim) + v * strengths.asDiagonal() * v.transpose();
            out = 0.5 * (out + out.transpose());
            return SymmetricMatrix(std::move(out));
          },
          [&](const model::FromFile& f) { return SymmetricMatrix(read_csv_matrix(f.path)); },
      },
      m.kind);
}

RegimeStats regime_stats(const SymmetricMatrix& sigma) {
  RegimeStats r;
  r.operator_norm = operator_norm(sigma);
  r.trace = sigma.trace();
  r.mean_eigenvalue = r.trace / static_cast<double>(sigma.dim());
  r.trace_of_square = sigma.matrix().squaredNorm();
  return r;
}

GroundTruth::GroundTruth(SymmetricMatrix s)
    : sigma(std::move(s)), root(sym_sqrt(sigma)), stats(regime_stats(sigma)) {}

}  // namespace rie
