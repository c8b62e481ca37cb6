#pragma once

#include <json.hpp>

#include "rie/estimators.hpp"
#include "rie/gaussian_checks.hpp"
#include "rie/simulation.hpp"

namespace rie {

// Complex numbers serialize as [re, im]; vectors and matrices as (nested) arrays.

nlohmann::json to_json(const VectorXd& v);
nlohmann::json to_json(const MatrixXd& m);
nlohmann::json to_json(Complex z);
nlohmann::json to_json(const EstimatorReport& r);
nlohmann::json to_json(const TrialReport& r);
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const ConvergenceRow& r);
nlohmann::json to_json(const LemmaTrial& r);
nlohmann::json to_json(const LemmaSummary& s);  // without per_trial
nlohmann::json to_json(const SideBySide& c);
nlohmann::json to_json(const SteinSummary& s);
nlohmann::json to_json(const SteinMatrixSummary& s);
nlohmann::json to_json(const ConcentrationCheck& c);

}  // namespace rie
