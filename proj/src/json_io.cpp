#include "rie/json_io.hpp"

#include <cmath>

namespace rie {

using nlohmann::json;

namespace {

// JSON has no NaN/Inf; emit null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json complex_array(const std::vector<Complex>& v) {
  json a = json::array();
  for (Complex z : v) a.push_back(to_json(z));
  return a;
}

}  // namespace

json to_json(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json to_json(const MatrixXd& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(VectorXd(m.row(i).transpose())));
  return a;
}

json to_json(Complex z) { return json::array({num(z.real()), num(z.imag())}); }

json to_json(const EstimatorReport& r) {
  return {{"frob_error_empirical", num(r.frob_error_empirical)},
          {"frob_error_cleaned", num(r.frob_error_cleaned)},
          {"frob_error_oracle", num(r.frob_error_oracle)},
          {"mean_gap_cleaned", num(r.per_eigenvalue_gap.size() ? r.per_eigenvalue_gap.mean() : 0.0)},
          {"mean_gap_raw", num(r.raw_gap.size() ? r.raw_gap.mean() : 0.0)},
          {"per_eigenvalue_gap", to_json(r.per_eigenvalue_gap)},
          {"degenerate_clusters", r.degenerate_clusters}};
}

json to_json(const TrialReport& r) {
  return {{"seed", r.seed},
          {"n", r.n},
          {"T", r.t_samples},
          {"q", num(r.q)},
          {"z_points", complex_array(r.z_points)},
          {"theorem1_residual", num_array(r.theorem1_residual)},
          {"relation_residual", num_array(r.relation_residual)},
          {"identity_residual", num_array(r.identity_residual)},
          {"imh_bound_ok", r.imh_bound_ok},
          {"min_one_plus_h", num(r.min_one_plus_h)},
          {"opnorm_ratio", num(r.opnorm_ratio)},
          {"trace_ratio", num(r.trace_ratio)},
          {"sigma_operator_norm", num(r.sigma_operator_norm)},
          {"sigma_mean_eigenvalue", num(r.sigma_mean_eigenvalue)},
          {"estimator_report", to_json(r.estimator_report)}};
}

json to_json(const IdentityReport& r) {
  json lhs = json::array(), rhs = json::array();
  for (const ImHBound& b : r.imh) {
    lhs.push_back(num(b.abs_im_h));
    rhs.push_back(num(b.bound));
  }
  return {{"seed", r.seed},
          {"n", r.n},
          {"T", r.t_samples},
          {"z_points", complex_array(r.z_points)},
          {"identity_residual", num_array(r.identity_residual)},
          {"max_identity_residual", num(r.max_identity_residual)},
          {"abs_im_h", lhs},
          {"im_h_bound", rhs},
          {"imh_bound_ok", r.imh_bound_ok}};
}

json to_json(const ConvergenceRow& r) {
  return {{"n", r.n},
          {"T", r.t_samples},
          {"median_theorem1_residual", num(r.median_theorem1)},
          {"median_relation_residual", num(r.median_relation)},
          {"max_identity_residual", num(r.max_identity)},
          {"imh_bound_ok", r.imh_bound_ok},
          {"min_one_plus_h", num(r.min_one_plus_h)}};
}

json to_json(const LemmaTrial& r) {
  return {{"seed", r.seed},
          {"opnorm_ratio", num(r.opnorm_ratio)},
          {"opnorm_q_ratio", num(r.opnorm_q_ratio)},
          {"trace_ratio", num(r.trace_ratio)}};
}

json to_json(const LemmaSummary& s) {
  return {{"n", s.n},
          {"T", s.t_samples},
          {"trials", s.trials},
          {"mean_trace_ratio", num(s.mean_trace_ratio)},
          {"trace_ratio_se", num(s.trace_ratio_se)},
          {"variance_trace", num(s.variance_trace)},
          {"variance_bound", num(s.variance_bound)},
          {"max_opnorm_ratio", num(s.max_opnorm_ratio)},
          {"max_opnorm_q_ratio", num(s.max_opnorm_q_ratio)},
          {"min_trace_ratio", num(s.min_trace_ratio)},
          {"mean_ok", s.mean_ok},
          {"variance_ok", s.variance_ok}};
}

json to_json(const SideBySide& c) {
  return {{"label", c.label},
          {"lhs", num(c.lhs.mean)},
          {"lhs_se", num(c.lhs.se)},
          {"rhs", num(c.rhs.mean)},
          {"rhs_se", num(c.rhs.se)},
          {"diff", num(c.diff)},
          {"diff_se", num(c.diff_se)},
          {"agrees", c.agrees}};
}

json to_json(const SteinSummary& s) {
  json checks = json::array();
  for (const SideBySide& c : s.checks) checks.push_back(to_json(c));
  json j{{"function", s.function}, {"dim", s.dim},   {"trials", s.trials},
         {"seed", s.seed},         {"checks", checks}, {"ok", s.ok}};
  if (s.second_moments.size() > 0) j["second_moments"] = to_json(s.second_moments);
  return j;
}

json to_json(const SteinMatrixSummary& s) {
  json checks = json::array();
  for (const SideBySide& c : s.checks) checks.push_back(to_json(c));
  json j{{"family", s.family}, {"dim", s.dim},       {"trials", s.trials}, {"seed", s.seed},
         {"z", to_json(s.z)},  {"checks", checks}, {"ok", s.ok}};
  if (s.closed_form) j["closed_form"] = to_json(*s.closed_form);
  return j;
}

json to_json(const ConcentrationCheck& c) {
  json tails = json::array();
  for (const TailCheck& t : c.tails) {
    tails.push_back({{"t", num(t.t)},
                     {"probability", num(t.probability)},
                     {"bound", num(t.bound)},
                     {"slack", num(t.slack)},
                     {"ok", t.ok}});
  }
  return {{"function", c.function},
          {"dim", c.dim},
          {"trials", c.trials},
          {"seed", c.seed},
          {"lipschitz", num(c.lipschitz)},
          {"variance", num(c.variance.mean)},
          {"variance_se", num(c.variance.se)},
          {"grad_sq_mean", num(c.grad_sq.mean)},
          {"grad_sq_se", num(c.grad_sq.se)},
          {"poincare_ok", c.poincare_ok},
          {"tails", tails},
          {"tail_ok", c.tail_ok}};
}

}  // namespace rie
