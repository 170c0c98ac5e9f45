#pragma once

// JSON bridges for hypotheses, spaces, discrete instances, and bound
// reports. Schemas are stable; they back golden-file tests and run audits.

#include <json.hpp>

#include "g2r/domain.hpp"
#include "g2r/estimators.hpp"
#include "g2r/exact.hpp"

namespace g2r {

nlohmann::json hypothesis_to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const nlohmann::json& j);

nlohmann::json space_to_json(const HypothesisSpace& s);
HypothesisSpace space_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const exact::DiscreteInstance& inst);
exact::DiscreteInstance instance_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const est::BoundReport& r);
est::BoundReport bound_report_from_json(const nlohmann::json& j);

}  // namespace g2r
