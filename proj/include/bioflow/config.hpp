#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "bioflow/conversion.hpp"
#include "bioflow/datamodel.hpp"
#include "bioflow/lp/simplex.hpp"
#include "bioflow/transport.hpp"

namespace bioflow {

enum class DemandMode { Equality, AtLeast };

const char* to_string(DemandMode m);
std::optional<DemandMode> parse_demand_mode(std::string_view text);

struct ExpansionConfig {
    /// Upper bound on each new plant's capacity, MW. Unbounded by default.
    double max_new_capacity_mw = lp::kInf;
    /// Inventory cap of a new plant per MW of capacity (tons/MW). When
    /// absent, the largest K/Pmax among existing plants of the same kind.
    std::optional<double> inventory_per_mw;
};

struct ScenarioConfig {
    EfficiencySet efficiencies;
    double fx_rate = 33.0;  // THB per USD
    /// Operating cost rate per technology q1..q4, USD/kWh. Mid-points of the
    /// published investment LCOE ranges; q4 borrows q2's value.
    std::array<double, 4> lcoe_usd_per_kwh{0.085, 0.195, 0.18, 0.195};
    double ethanol_cost_thb_per_liter = 3.0;
    double availability_factor = 0.89;
    double epsilon_operation = 0.05;
    DemandMode demand_mode = DemandMode::Equality;
    double initial_inventory = 0.0;  // tons per (biomass, plant)
    double molasses_per_sugarcane = 0.046;
    /// Replaces the dataset's demand targets when set.
    std::optional<DemandTargets> demand;
    TruckFleet fleet;
    double winding_factor = 1.3;
    double default_holding_cost = 50.0;
    ExpansionConfig expansion;
    lp::SolverOptions solver;

    /// THB per MWh for q1..q4, THB per liter for q5.
    double operating_cost(Technology q) const;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

/// `key = value` lines; '#' starts a comment. Unknown keys are errors.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, in file syntax. Loading the output
/// reproduces `cfg`.
std::string write_config(const ScenarioConfig& cfg);

}  // namespace bioflow
