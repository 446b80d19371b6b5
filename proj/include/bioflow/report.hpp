#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <string>
#include <vector>

#include "bioflow/scenarios.hpp"

namespace bioflow {

/// Report document for a solved scenario. Key order is fixed and no timing
/// data is included, so equal inputs give equal bytes.
std::string report_json(const ScenarioReport& report, const std::vector<PassResult>& passes);

/// Report for a run that did not reach an optimum: status and passes only.
std::string status_report_json(ScenarioKind scenario, DemandMode mode, lp::SolveStatus status,
                               const std::vector<PassResult>& passes);

/// biomass,month,used,available
void write_biomass_usage_csv(std::ostream& out, const ScenarioReport& report);
/// plant,kind,month,output
void write_production_csv(std::ostream& out, const ScenarioReport& report);
/// plant,month,tons
void write_inventory_csv(std::ostream& out, const ScenarioReport& report);

/// Built-in reference tables for `bioflow tables`.
enum class ReferenceTable { Prices, Heat, Biogas, Density, Transport };

std::optional<ReferenceTable> parse_reference_table(std::string_view name);
void write_reference_table(std::ostream& out, ReferenceTable which, const TruckFleet& fleet = {});

}  // namespace bioflow
