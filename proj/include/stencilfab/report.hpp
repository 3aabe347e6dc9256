#pragma once
/// @file report.hpp
/// @brief Simulation report document: ordered JSON (report_version 1), a flat
///        CSV summary, and the required-key checker the schema mirrors.

#include <string>
#include <vector>

#include "json.hpp"
#include "stencilfab/fabric.hpp"
#include "stencilfab/plan.hpp"
#include "stencilfab/simulator.hpp"

namespace stencilfab {

/// Full report for one simulation run. Includes the closed-form row-period
/// prediction next to the measured steady period so model error is visible.
nlohmann::ordered_json sim_report_json(const MappingPlan& plan, const FabricSpec& fabric,
                                       const SimResult& result);

/// Header line plus one data row of the report's scalar summary fields.
std::string sim_report_csv(const MappingPlan& plan, const FabricSpec& fabric,
                           const SimResult& result);

/// Top-level keys every version-1 report must carry, in document order.
const std::vector<std::string>& report_required_keys();

/// Throws a validation error when `doc` is not a well-formed version-1
/// report (wrong/missing version, missing required key, or a non-object).
void verify_report_json(const nlohmann::json& doc);

} // namespace stencilfab
