#pragma once

#include <string>

#include <json.hpp>

#include "divischan/divisibility.hpp"
#include "divischan/gaussian.hpp"
#include "divischan/normalform.hpp"

namespace divischan {

// Round-trip decimal (17 significant digits).
std::string format_double(double v);

struct ParseError : Error {
  using Error::Error;
};

// {"repr":"pauli"|"choi"|"kraus","data":[...]}
PauliTransferMatrix channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const PauliTransferMatrix& e);

nlohmann::json report_to_json(const DivisibilityReport& r);
nlohmann::json to_json(const SpecialOrthogonalForm& f);
nlohmann::json to_json(const LorentzForm& f);

GaussianForm form_from_json(const nlohmann::json& j);
nlohmann::json form_to_json(const GaussianForm& f);
nlohmann::json tuple_to_json(const GaussianTuple& t);

}  // namespace divischan
