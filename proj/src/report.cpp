#include "bioflow/report.hpp"

#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "bioflow/csv.hpp"
#include "bioflow/transport.hpp"

namespace bioflow {

namespace {

using Json = nlohmann::ordered_json;

Json passes_json(const std::vector<PassResult>& passes) {
    Json out = Json::array();
    for (const auto& p : passes)
        out.push_back({{"name", p.name},
                       {"status", lp::to_string(p.status)},
                       {"objective", p.objective},
                       {"iterations", p.iterations}});
    return out;
}

Json targets_json(const DemandTargets& d) {
    return {{"biomass_mw", d.biomass_mw}, {"biogas_mw", d.biogas_mw}, {"ethanol_ml_per_day", d.ethanol_ml_per_day}};
}

Json kind_json(const KindSummary& k) {
    return {{"plants", k.plants},
            {"operating", k.operating},
            {"output", k.output},
            {"energy_mwh", k.energy_mwh},
            {"nameplate", k.nameplate},
            {"capacity_factor", k.capacity_factor},
            {"operation_rate", k.operation_rate},
            {"inventory_utilization", k.inventory_utilization},
            {"inventory_variance", k.inventory_variance},
            {"peak_inventory", k.peak_inventory}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string month(std::size_t m) { return std::to_string(m); }

}  // namespace

std::string report_json(const ScenarioReport& r, const std::vector<PassResult>& passes) {
    Json j;
    j["scenario"] = to_string(r.scenario);
    j["demand_mode"] = to_string(r.demand_mode);
    j["status"] = "Optimal";
    j["objective"] = r.objective;
    j["iterations"] = r.iterations;
    j["passes"] = passes_json(passes);
    j["cost_thb"] = {{"biomass", r.cost.biomass},
                     {"transport", r.cost.transport},
                     {"operating", r.cost.operating},
                     {"holding", r.cost.holding},
                     {"total", r.cost.total()}};
    j["holding_cost_defaulted"] = r.holding_cost_defaulted;

    Json kinds;
    for (auto k : kPlantKinds) kinds[std::string(plant_kind_name(k))] = kind_json(r.of(k));
    j["kinds"] = kinds;
    j["overall"] = kind_json(r.overall);
    j["total_twh"] = r.total_twh;

    j["targets"] = targets_json(r.targets);
    if (r.achieved_demand) j["achieved_demand"] = targets_json(*r.achieved_demand);
    if (r.peak_bound) j["peak_inventory_bound"] = *r.peak_bound;

    if (r.scenario == ScenarioKind::Expansion) {
        Json extra = Json::array();
        for (const auto& a : r.additional_supply) extra.push_back({{"biomass", a.biomass}, {"tons", a.tons}});
        j["additional_supply"] = {{"total_tons", r.additional_supply_total}, {"by_biomass", extra}};
        j["sugarcane_equivalent_tons"] = r.sugarcane_equivalent_tons;
        Json plants = Json::array();
        for (const auto& p : r.new_plants)
            plants.push_back({{"plant_id", p.plant_id},
                              {"kind", plant_kind_name(p.kind)},
                              {"lat", p.location.lat},
                              {"lon", p.location.lon},
                              {"capacity_mw", p.capacity_mw}});
        j["new_plants"] = plants;
    }
    return dump(j);
}

std::string status_report_json(ScenarioKind scenario, DemandMode mode, lp::SolveStatus status,
                               const std::vector<PassResult>& passes) {
    Json j;
    j["scenario"] = to_string(scenario);
    j["demand_mode"] = to_string(mode);
    j["status"] = lp::to_string(status);
    j["passes"] = passes_json(passes);
    return dump(j);
}

void write_biomass_usage_csv(std::ostream& out, const ScenarioReport& r) {
    csv::write_row(out, {"biomass", "month", "used", "available"});
    for (const auto& row : r.biomass_usage)
        csv::write_row(out, {row.biomass, month(row.month), csv::number(row.used), csv::number(row.available)});
}

void write_production_csv(std::ostream& out, const ScenarioReport& r) {
    csv::write_row(out, {"plant", "kind", "month", "output"});
    for (const auto& row : r.production)
        csv::write_row(out, {row.plant, std::string(plant_kind_name(row.kind)), month(row.month),
                             csv::number(row.output)});
}

void write_inventory_csv(std::ostream& out, const ScenarioReport& r) {
    csv::write_row(out, {"plant", "month", "tons"});
    for (const auto& row : r.inventory) csv::write_row(out, {row.plant, month(row.month), csv::number(row.tons)});
}

std::optional<ReferenceTable> parse_reference_table(std::string_view name) {
    if (name == "prices") return ReferenceTable::Prices;
    if (name == "heat") return ReferenceTable::Heat;
    if (name == "biogas") return ReferenceTable::Biogas;
    if (name == "density") return ReferenceTable::Density;
    if (name == "transport") return ReferenceTable::Transport;
    return std::nullopt;
}

void write_reference_table(std::ostream& out, ReferenceTable which, const TruckFleet& fleet) {
    const auto& table = builtin_biomass_table();
    auto opt = [](const std::optional<double>& v) { return v ? csv::number(*v) : std::string(); };
    switch (which) {
        case ReferenceTable::Prices:
            csv::write_row(out, {"biomass", "price_thb_per_ton"});
            for (const auto& b : table) csv::write_row(out, {std::string(biomass_name(b.id)), csv::number(b.price)});
            break;
        case ReferenceTable::Heat:
            csv::write_row(out, {"biomass", "heat_capacity_mj_per_ton"});
            for (const auto& b : table) csv::write_row(out, {std::string(biomass_name(b.id)), opt(b.heat_capacity)});
            break;
        case ReferenceTable::Biogas:
            csv::write_row(out, {"biomass", "methane_m3_per_kg", "heat_equivalent_mj_per_ton"});
            for (const auto& b : table) {
                if (!b.methane_content) continue;
                csv::write_row(out, {std::string(biomass_name(b.id)), csv::number(*b.methane_content),
                                     b.biogas_heat_equiv ? fmt::format("{:.4f}", *b.biogas_heat_equiv) : ""});
            }
            break;
        case ReferenceTable::Density:
            csv::write_row(out, {"biomass", "density_kg_per_m3"});
            for (const auto& b : table) csv::write_row(out, {std::string(biomass_name(b.id)), csv::number(b.density)});
            break;
        case ReferenceTable::Transport:
            csv::write_row(out, {"biomass", "truck", "tons_per_trip", "thb_per_km_ton"});
            for (const auto& b : table) {
                const auto& truck = fleet.for_biomass(b.id);
                csv::write_row(out, {std::string(biomass_name(b.id)), truck.name, fmt::format("{:.2f}", truck_load(b, truck)),
                                     fmt::format("{:.2f}", unit_cost(b, truck))});
            }
            break;
    }
}

}  // namespace bioflow
