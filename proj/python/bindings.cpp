#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rie/errors.hpp"
#include "rie/estimators.hpp"
#include "rie/json_io.hpp"
#include "rie/models.hpp"
#include "rie/simulation.hpp"
#include "rie/suites.hpp"
#include "rie/transforms.hpp"

namespace py = pybind11;
using namespace rie;

namespace {

// Eigenvalue-only view; G, H and the cleaning formula never touch eigenvectors.
EigenSystem spectrum(const VectorXd& eigenvalues) {
  EigenSystem es;
  es.eigenvalues = eigenvalues;
  return es;
}

MatrixXd prepare(MatrixXd data, bool transpose, bool center) {
  if (transpose) data.transposeInPlace();
  if (center) data = center_rows(data);
  return data;
}

py::dict clean(const MatrixXd& data, double alpha, std::optional<double> eta, std::optional<double> q,
               bool trace_preserve, bool center, bool transpose) {
  const MatrixXd x = prepare(data, transpose, center);
  const SymmetricMatrix e = empirical_covariance(x);
  const EigenSystem es = eig_covariance(e);
  const CleanedSpectrum c =
      lp_clean(es, static_cast<std::size_t>(x.cols()), {.alpha = alpha, .eta = eta, .q = q, .trace_preserve = trace_preserve});
  py::dict out;
  out["covariance"] = assemble(es, c).matrix();
  out["eigenvalues"] = es.eigenvalues;
  out["eigenvectors"] = es.eigenvectors;
  out["cleaned_eigenvalues"] = c.cleaned;
  out["eta"] = c.eta;
  out["q"] = c.q;
  out["n"] = x.rows();
  out["T"] = x.cols();
  return out;
}

}  // namespace

PYBIND11_MODULE(_rieclean, m) {
  m.doc() = "Covariance eigenvalue cleaning and its Monte Carlo checks";

  py::register_exception<PoleError>(m, "PoleError", PyExc_ValueError);
  py::register_exception<SingularError>(m, "SingularError", PyExc_ValueError);
  py::register_exception<AmbiguousIntervalError>(m, "AmbiguousIntervalError", PyExc_ValueError);

  m.def("empirical_covariance",
        [](const MatrixXd& data) { return empirical_covariance(data).matrix(); }, py::arg("data"),
        "(1/T) X X' for an n x T array, rows are variables. No demeaning.");
  m.def("center_rows", &center_rows, py::arg("data"));
  m.def(
      "eig_covariance",
      [](const MatrixXd& cov) {
        const EigenSystem es = eig_covariance(SymmetricMatrix(cov));
        return py::make_tuple(es.eigenvalues, es.eigenvectors);
      },
      py::arg("cov"), "Descending eigenvalues and matching eigenvectors (columns).");

  m.def("clean", &clean, py::arg("data"), py::arg("alpha") = 0.5, py::arg("eta") = py::none(),
        py::arg("q") = py::none(), py::arg("trace_preserve") = false, py::arg("center") = false,
        py::arg("transpose") = false);
  m.def(
      "clean_eigenvalues",
      [](const VectorXd& eigenvalues, std::size_t t_samples, double alpha, std::optional<double> eta,
         std::optional<double> q) {
        return lp_clean(spectrum(eigenvalues), t_samples, {.alpha = alpha, .eta = eta, .q = q}).cleaned;
      },
      py::arg("eigenvalues"), py::arg("t_samples"), py::arg("alpha") = 0.5, py::arg("eta") = py::none(),
      py::arg("q") = py::none());
  m.def(
      "oracle_eigenvalues",
      [](const MatrixXd& eigenvectors, const MatrixXd& sigma) {
        EigenSystem es;
        es.eigenvectors = eigenvectors;
        es.eigenvalues = VectorXd::Zero(eigenvectors.cols());
        return projected_variances(es, SymmetricMatrix(sigma));
      },
      py::arg("eigenvectors"), py::arg("sigma"), "u_k' Sigma u_k for each column u_k.");

  m.def(
      "stieltjes_g",
      [](const VectorXd& ev, std::size_t t, Complex z) { return stieltjes_g(spectrum(ev), t, z); },
      py::arg("eigenvalues"), py::arg("t_samples"), py::arg("z"));
  m.def(
      "h_functional",
      [](const VectorXd& ev, std::size_t t, Complex z) { return h_functional(spectrum(ev), t, z); },
      py::arg("eigenvalues"), py::arg("t_samples"), py::arg("z"));
  m.def(
      "stieltjes_l",
      [](const MatrixXd& cov, const MatrixXd& sigma, std::size_t t, Complex z) {
        return stieltjes_l(eig_covariance(SymmetricMatrix(cov)), SymmetricMatrix(sigma), t, z);
      },
      py::arg("cov"), py::arg("sigma"), py::arg("t_samples"), py::arg("z"));
  m.def("theorem1_rhs", &theorem1_rhs, py::arg("g"), py::arg("z"), py::arg("q"));
  m.def("cleaned_eigenvalue", &cleaned_eigenvalue, py::arg("lam"), py::arg("g"), py::arg("q"));
  m.def(
      "rn_ratio_oracle",
      [](const MatrixXd& cov, const MatrixXd& sigma, std::size_t t, Index k, double eta,
         std::optional<double> epsilon) {
        return rn_ratio_oracle(eig_covariance(SymmetricMatrix(cov)), SymmetricMatrix(sigma), t, k, epsilon, eta);
      },
      py::arg("cov"), py::arg("sigma"), py::arg("t_samples"), py::arg("k"), py::arg("eta"),
      py::arg("epsilon") = py::none());

  m.def(
      "make_sigma",
      [](const std::string& model, Index n) { return make_sigma(CovarianceModel::parse(model, n)).matrix(); },
      py::arg("model"), py::arg("n") = 1);
  m.def(
      "sample_gaussian",
      [](const MatrixXd& sigma, std::size_t t, std::uint64_t seed) {
        return sample_gaussian(SymmetricMatrix(sigma), t, seed);
      },
      py::arg("sigma"), py::arg("t_samples"), py::arg("seed"));

  m.def(
      "_verify_theorem1",
      [](const std::string& model, Index n, std::size_t t, const std::vector<Complex>& z, std::uint64_t seed) {
        return to_json(verify_theorem1(CovarianceModel::parse(model, n), t, z, seed)).dump();
      },
      py::arg("model"), py::arg("n"), py::arg("t_samples"), py::arg("z_points"), py::arg("seed"));
  m.def(
      "_run_suite",
      [](const std::string& name, std::uint64_t seed, std::optional<std::size_t> trials, std::size_t jobs) {
        SuiteOptions o;
        o.seed = seed;
        o.trials = trials;
        o.jobs = jobs;
        std::vector<std::string> out;
        {
          py::gil_scoped_release release;
          for (const SuiteResult& r : run_suite(name, o)) out.push_back(r.summary().dump());
        }
        return out;
      },
      py::arg("name"), py::arg("seed") = 1, py::arg("trials") = py::none(), py::arg("jobs") = 1);
  m.def("suite_names", &suite_names);
}
