#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bioflow/config.hpp"
#include "bioflow/datamodel.hpp"
#include "bioflow/lp/model.hpp"
#include "bioflow/transport.hpp"

namespace bioflow {

enum class ScenarioKind { Potential, MinCost, FullOperation, Expansion };

const char* to_string(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text);

inline constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();

/// A new plant position for the expansion scenario.
struct CandidateSite {
    std::string plant_id;
    PlantKind kind{};
    GeoPoint location;
};

/// An LP together with the maps from domain indices to its columns.
/// Plants are the dataset's plants followed by any new (expansion) plants.
struct BuiltModel {
    ScenarioKind scenario = ScenarioKind::MinCost;
    lp::LpModel model;

    std::size_t n_suppliers = 0;
    std::size_t n_biomass = 0;
    std::size_t n_plants = 0;
    std::size_t n_months = 0;
    std::size_t n_existing = 0;
    std::vector<Plant> plants;

    /// Output per ton consumed, [b][j] flattened; 0 when ineligible.
    std::vector<double> yield;
    /// Supplier-to-plant km, [i][j] flattened.
    std::vector<double> km;
    /// THB per (km * ton) by biomass.
    std::vector<double> unit_transport;
    /// THB per unit of output by plant.
    std::vector<double> operating_cost;
    /// C5 limit for existing plants, [j][t] flattened; for new plants the
    /// factor multiplying their capacity variable.
    std::vector<double> cap;

    std::vector<std::size_t> x_cols;  // [i][b][j][t]
    std::vector<std::size_t> u_cols;  // [b][j][t]
    std::vector<std::size_t> v_cols;  // [b][j][t]
    std::vector<std::size_t> e_cols;  // [j][t]

    /// Potential scenario: D_B (MW), D_G (MW), D_Eth (ML/day) by PlantKind.
    std::array<std::size_t, 3> demand_vars{kNoColumn, kNoColumn, kNoColumn};
    /// Full-operation scenario: common bound on every plant's monthly stock.
    std::size_t peak_var = kNoColumn;
    /// Expansion: additional annual supply s+ per (supplier, biomass).
    std::vector<std::size_t> splus_cols;  // [i][b]
    /// Expansion: capacity (MW) of each new plant, indexed j - n_existing.
    std::vector<std::size_t> capacity_cols;
    /// Expansion: inventory tons allowed per MW of new capacity, by kind.
    std::array<double, 3> new_inventory_per_mw{0.0, 0.0, 0.0};

    bool has_demand_rows = false;
    DemandTargets demands;
    DemandMode demand_mode = DemandMode::Equality;
    /// Cost objective (min-cost, full-operation pass 2).
    std::vector<double> cost_objective;

    std::size_t x(std::size_t i, std::size_t b, std::size_t j, std::size_t t) const {
        return x_cols[((i * n_biomass + b) * n_plants + j) * n_months + t];
    }
    std::size_t u(std::size_t b, std::size_t j, std::size_t t) const {
        return u_cols[(b * n_plants + j) * n_months + t];
    }
    std::size_t v(std::size_t b, std::size_t j, std::size_t t) const {
        return v_cols[(b * n_plants + j) * n_months + t];
    }
    std::size_t e(std::size_t j, std::size_t t) const { return e_cols[j * n_months + t]; }
    double yield_of(std::size_t b, std::size_t j) const { return yield[b * n_plants + j]; }
    double km_of(std::size_t i, std::size_t j) const { return km[i * n_plants + j]; }
    double cap_of(std::size_t j, std::size_t t) const { return cap[j * n_months + t]; }
    bool is_new(std::size_t j) const { return j >= n_existing; }
};

/// Supply (C1), balance (C2), inventory caps (C3), conversion (C4) and
/// production caps (C5) with no objective. C5 for dataset plants is carried
/// as upper bounds on e.
BuiltModel build_flow_core(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist);
BuiltModel build_flow_core(const Dataset& ds, const ScenarioConfig& cfg);

BuiltModel build_min_cost(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                          const DistanceProvider& dist);
BuiltModel build_potential(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist);
/// Min-cost model plus operation floors and the peak-inventory variable.
/// The objective is left as cost; run_full_operation does the two passes.
BuiltModel build_full_operation(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                                const DistanceProvider& dist);
/// Objective is total additional supply.
BuiltModel build_expansion(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& targets,
                           const std::vector<CandidateSite>& sites, const DistanceProvider& dist);

struct PassResult {
    std::string name;
    lp::SolveStatus status = lp::SolveStatus::Infeasible;
    double objective = 0.0;
    std::size_t iterations = 0;
};

struct ScenarioRun {
    BuiltModel built;
    lp::Solution solution;
    std::vector<PassResult> passes;
    /// Expansion: the sites used in the final round.
    std::vector<CandidateSite> sites;

    bool optimal() const { return solution.optimal(); }
    std::size_t iterations() const;
};

ScenarioRun run_potential(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist);
ScenarioRun run_min_cost(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                         const DistanceProvider& dist);
/// Pass 1 minimizes the peak; pass 2 caps it at the optimum (+1e-6) and
/// minimizes cost.
ScenarioRun run_full_operation(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                               const DistanceProvider& dist);
/// Pass 1 minimizes additional supply; pass 2 holds it and minimizes new
/// capacity. Without explicit sites, one virtual site per power kind is
/// solved first and the sites are moved to the center of gravity of what
/// they received before the final solve.
ScenarioRun run_expansion(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& targets,
                          const DistanceProvider& dist,
                          const std::optional<std::vector<CandidateSite>>& sites = std::nullopt);

struct WeightedPoint {
    GeoPoint location;
    double weight = 0.0;
};

/// Weighted mean of coordinates. Throws AllZeroWeights when no point carries
/// positive weight.
GeoPoint center_of_gravity(const std::vector<WeightedPoint>& points);

/// Sugarcane tons behind `molasses_tons` at the configured molasses ratio.
double sugarcane_equivalent(double molasses_tons, const ScenarioConfig& cfg);

struct CostBreakdown {
    double biomass = 0.0;
    double transport = 0.0;
    double operating = 0.0;
    double holding = 0.0;

    double total() const { return biomass + transport + operating + holding; }
};

struct KindSummary {
    std::size_t plants = 0;
    std::size_t operating = 0;
    double output = 0.0;     // MWh, or liters for ethanol
    double energy_mwh = 0.0;
    double nameplate = 0.0;  // un-derated, same unit as output
    double capacity_factor = 0.0;
    double operation_rate = 0.0;
    double inventory_utilization = 0.0;
    double inventory_variance = 0.0;  // tons^2, mean over plants
    double peak_inventory = 0.0;
};

struct BiomassUsageRow {
    std::string biomass;
    std::size_t month = 0;  // 1-based
    double used = 0.0;
    double available = 0.0;
};

struct ProductionRow {
    std::string plant;
    PlantKind kind{};
    std::size_t month = 0;
    double output = 0.0;
};

struct InventoryRow {
    std::string plant;
    std::size_t month = 0;
    double tons = 0.0;
};

struct NewPlantSummary {
    std::string plant_id;
    PlantKind kind{};
    GeoPoint location;
    double capacity_mw = 0.0;
};

struct AdditionalSupply {
    std::string biomass;
    double tons = 0.0;
};

struct ScenarioReport {
    ScenarioKind scenario = ScenarioKind::MinCost;
    DemandMode demand_mode = DemandMode::Equality;
    double objective = 0.0;
    std::size_t iterations = 0;

    CostBreakdown cost;
    bool holding_cost_defaulted = false;

    std::array<KindSummary, 3> kinds;  // by PlantKind
    KindSummary overall;               // output and nameplate in MWh
    double total_twh = 0.0;

    DemandTargets targets;
    /// Potential: the optimal demand variables.
    std::optional<DemandTargets> achieved_demand;
    /// Full operation: the minimized peak.
    std::optional<double> peak_bound;

    double additional_supply_total = 0.0;
    std::vector<AdditionalSupply> additional_supply;
    double sugarcane_equivalent_tons = 0.0;
    std::vector<NewPlantSummary> new_plants;

    std::vector<BiomassUsageRow> biomass_usage;
    std::vector<ProductionRow> production;
    std::vector<InventoryRow> inventory;

    const KindSummary& of(PlantKind k) const { return kinds[static_cast<std::size_t>(k)]; }
};

/// Throws NonOptimalSolution unless `solution` is Optimal.
ScenarioReport evaluate(const BuiltModel& built, const lp::Solution& solution, const Dataset& ds,
                        const ScenarioConfig& cfg);
ScenarioReport evaluate(const ScenarioRun& run, const Dataset& ds, const ScenarioConfig& cfg);

/// Population variance (divisor N).
double population_variance(const std::vector<double>& values);

/// Relative cost change from `base` to `other`.
double cost_increase(double base, double other);

/// Worst violation of each constraint family, recomputed from the dataset
/// rather than read back from the LP rows.
struct FlowResiduals {
    double supply = 0.0;       // C1, tons
    double balance = 0.0;      // C2, tons
    double inventory = 0.0;    // C3, tons
    double conversion = 0.0;   // C4, output units
    double capacity = 0.0;     // C5, output units
    double negativity = 0.0;   // largest negative flow
    double demand = 0.0;       // relative to the target
    /// max over (b, j) of |inflow - consumption - (v_final - v_initial)|
    /// divided by 1 + the largest flow magnitude.
    double conservation = 0.0;

    double worst_c1_c5() const;
};

FlowResiduals check_flow(const BuiltModel& built, const lp::Solution& solution, const Dataset& ds,
                         const ScenarioConfig& cfg);

}  // namespace bioflow
