#pragma once

#include <nlohmann/json.hpp>

#include "netident/algebraic_identifiability.hpp"
#include "netident/assignation_conditions.hpp"
#include "netident/graph_analysis.hpp"

namespace netident {

using ordered_json = nlohmann::ordered_json;

// [re, im]
ordered_json to_json(Complex z);
ordered_json to_json(const ComplexVector& v);

ordered_json to_json(const IdentifiabilityReport& report);
ordered_json to_json(const PathCertificate& cert);

// One row per unknown edge: {"edge": [from, to], "excitation": b, "measurement": c},
// with b and c given as node ids. Absent sides are omitted.
ordered_json to_json(const NetworkStructure& s, const Assignation& a);
ordered_json to_json(const NetworkStructure& s, const ConditionVerdict& v);

}  // namespace netident
