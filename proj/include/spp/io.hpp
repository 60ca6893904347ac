#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "spp/audit.hpp"
#include "spp/dependence.hpp"
#include "spp/mechanisms.hpp"
#include "spp/report.hpp"
#include "spp/valuation.hpp"

namespace spp::io {

using Json = nlohmann::ordered_json;

Json rational_json(const Rational& r);
Rational parse_rational_json(const Json& j);

Json valuation_json(const valuation::Valuation& v);
valuation::Valuation parse_valuation_json(const Json& j);

// {"n", "k", "support": [[p/q...]...], "mass": [p/q...]}
Json instance_json(const valuation::Instance& instance);
valuation::Instance parse_instance_json(const Json& j);
std::string serialize_instance(const valuation::Instance& instance);
valuation::Instance parse_instance(std::string_view text);

Json stats_json(const valuation::SupportStats& stats);
Json certificate_json(const valuation::DependenceCertificate& cert);

Json policy_json(const mech::Policy& policy);
mech::Policy parse_policy_json(const Json& j);

Json table_json(const mech::DirectMechanismTable& table);
mech::DirectMechanismTable parse_table_json(const Json& j);

Json finding_json(const eval::AuditFinding& finding);
Json report_json(const eval::ReportSet& report);

}  // namespace spp::io
