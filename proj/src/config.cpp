#include "bioflow/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <vector>

#include <fmt/format.h>

#include "bioflow/csv.hpp"

namespace bioflow {

const char* to_string(DemandMode m) { return m == DemandMode::Equality ? "equality" : "at-least"; }

std::optional<DemandMode> parse_demand_mode(std::string_view text) {
    if (text == "equality" || text == "eq") return DemandMode::Equality;
    if (text == "at-least" || text == "at_least" || text == "geq") return DemandMode::AtLeast;
    return std::nullopt;
}

double ScenarioConfig::operating_cost(Technology q) const {
    if (q == Technology::Fermentation) return ethanol_cost_thb_per_liter;
    // USD/kWh -> THB/MWh
    return lcoe_usd_per_kwh[static_cast<std::size_t>(tech_index(q) - 1)] * fx_rate * 1000.0;
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(availability_factor > 0.0 && availability_factor <= 1.0)) fail("availability_factor must lie in (0, 1]");
    if (!(epsilon_operation >= 0.0 && epsilon_operation <= 1.0)) fail("epsilon_operation must lie in [0, 1]");
    if (!(fx_rate > 0.0)) fail("fx_rate must be positive");
    for (double e : efficiencies.eta)
        if (!(e > 0.0 && e <= 1.0)) fail("efficiencies must lie in (0, 1]");
    for (double c : lcoe_usd_per_kwh)
        if (!(c >= 0.0)) fail("lcoe values must be >= 0");
    if (!(ethanol_cost_thb_per_liter >= 0.0)) fail("ethanol_cost_thb_per_liter must be >= 0");
    if (!(initial_inventory >= 0.0)) fail("initial_inventory must be >= 0");
    if (!(molasses_per_sugarcane > 0.0)) fail("molasses_per_sugarcane must be positive");
    if (!(winding_factor > 0.0)) fail("distance.winding_factor must be positive");
    if (!(default_holding_cost >= 0.0)) fail("holding_cost_default must be >= 0");
    for (const auto* t : {&fleet.flatbed, &fleet.tanker}) {
        if (!(t->payload > 0.0) || !(t->cost_per_km > 0.0)) fail("truck payload and cost must be positive");
        if (t->cargo_volume && !(*t->cargo_volume > 0.0)) fail("truck cargo volume must be positive");
    }
    if (demand && (demand->biomass_mw < 0 || demand->biogas_mw < 0 || demand->ethanol_ml_per_day < 0))
        fail("demand targets must be >= 0");
    if (!(expansion.max_new_capacity_mw >= 0.0)) fail("expansion.max_new_capacity_mw must be >= 0");
    if (expansion.inventory_per_mw && !(*expansion.inventory_per_mw >= 0.0))
        fail("expansion.inventory_per_mw must be >= 0");
    if (!(solver.feasibility_tolerance > 0.0 && solver.optimality_tolerance > 0.0 && solver.pivot_tolerance > 0.0))
        fail("solver tolerances must be positive");
    if (solver.refactor_interval == 0) fail("solver.refactor_interval must be >= 1");
}

namespace {

struct Key {
    std::function<void(ScenarioConfig&, std::string_view)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return csv::number(v);
}

double to_number(std::string_view key, std::string_view text) {
    if (text == "inf") return lp::kInf;
    auto v = csv::parse_double(text);
    if (!v) throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, text));
    return *v;
}

std::size_t to_count(std::string_view key, std::string_view text) {
    auto v = csv::parse_int(text);
    if (!v || *v < 0) throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
    return static_cast<std::size_t>(*v);
}

bool to_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

DemandTargets& demand_of(ScenarioConfig& c) {
    if (!c.demand) c.demand = DemandTargets{};
    return *c.demand;
}

std::string opt_num(const std::optional<double>& v) { return v ? fmt_num(*v) : ""; }

const std::map<std::string, Key, std::less<>>& keys() {
    static const std::map<std::string, Key, std::less<>> table = [] {
        std::map<std::string, Key, std::less<>> k;
        auto number = [&](const std::string& name, auto member) {
            k[name] = {[name, member](ScenarioConfig& c, std::string_view v) { member(c) = to_number(name, v); },
                       [member](const ScenarioConfig& c) { return fmt_num(member(const_cast<ScenarioConfig&>(c))); }};
        };
        for (int q = 1; q <= 4; ++q) {
            auto i = static_cast<std::size_t>(q - 1);
            number(fmt::format("efficiency.q{}", q), [i](ScenarioConfig& c) -> double& { return c.efficiencies.eta[i]; });
            number(fmt::format("lcoe.q{}", q), [i](ScenarioConfig& c) -> double& { return c.lcoe_usd_per_kwh[i]; });
        }
        number("fx_rate", [](ScenarioConfig& c) -> double& { return c.fx_rate; });
        number("ethanol_cost_thb_per_liter", [](ScenarioConfig& c) -> double& { return c.ethanol_cost_thb_per_liter; });
        number("availability_factor", [](ScenarioConfig& c) -> double& { return c.availability_factor; });
        number("epsilon_operation", [](ScenarioConfig& c) -> double& { return c.epsilon_operation; });
        number("initial_inventory", [](ScenarioConfig& c) -> double& { return c.initial_inventory; });
        number("molasses_per_sugarcane", [](ScenarioConfig& c) -> double& { return c.molasses_per_sugarcane; });
        number("distance.winding_factor", [](ScenarioConfig& c) -> double& { return c.winding_factor; });
        number("holding_cost_default", [](ScenarioConfig& c) -> double& { return c.default_holding_cost; });
        number("truck.flatbed.payload", [](ScenarioConfig& c) -> double& { return c.fleet.flatbed.payload; });
        number("truck.flatbed.cost_per_km", [](ScenarioConfig& c) -> double& { return c.fleet.flatbed.cost_per_km; });
        number("truck.tanker.payload", [](ScenarioConfig& c) -> double& { return c.fleet.tanker.payload; });
        number("truck.tanker.cost_per_km", [](ScenarioConfig& c) -> double& { return c.fleet.tanker.cost_per_km; });
        number("expansion.max_new_capacity_mw",
               [](ScenarioConfig& c) -> double& { return c.expansion.max_new_capacity_mw; });
        number("solver.pivot_tolerance", [](ScenarioConfig& c) -> double& { return c.solver.pivot_tolerance; });
        number("solver.feasibility_tolerance",
               [](ScenarioConfig& c) -> double& { return c.solver.feasibility_tolerance; });
        number("solver.optimality_tolerance",
               [](ScenarioConfig& c) -> double& { return c.solver.optimality_tolerance; });

        k["truck.flatbed.cargo_volume"] = {
            [](ScenarioConfig& c, std::string_view v) {
                if (v.empty())
                    c.fleet.flatbed.cargo_volume.reset();
                else
                    c.fleet.flatbed.cargo_volume = to_number("truck.flatbed.cargo_volume", v);
            },
            [](const ScenarioConfig& c) { return opt_num(c.fleet.flatbed.cargo_volume); }};
        k["expansion.inventory_per_mw"] = {
            [](ScenarioConfig& c, std::string_view v) {
                if (v.empty())
                    c.expansion.inventory_per_mw.reset();
                else
                    c.expansion.inventory_per_mw = to_number("expansion.inventory_per_mw", v);
            },
            [](const ScenarioConfig& c) { return opt_num(c.expansion.inventory_per_mw); }};
        k["demand_mode"] = {[](ScenarioConfig& c, std::string_view v) {
                                auto m = parse_demand_mode(v);
                                if (!m) throw ConfigError(fmt::format("demand_mode: unknown mode '{}'", v));
                                c.demand_mode = *m;
                            },
                            [](const ScenarioConfig& c) { return std::string(to_string(c.demand_mode)); }};
        k["demand.biomass_mw"] = {
            [](ScenarioConfig& c, std::string_view v) { demand_of(c).biomass_mw = to_number("demand.biomass_mw", v); },
            [](const ScenarioConfig& c) { return c.demand ? fmt_num(c.demand->biomass_mw) : ""; }};
        k["demand.biogas_mw"] = {
            [](ScenarioConfig& c, std::string_view v) { demand_of(c).biogas_mw = to_number("demand.biogas_mw", v); },
            [](const ScenarioConfig& c) { return c.demand ? fmt_num(c.demand->biogas_mw) : ""; }};
        k["demand.ethanol_ml_per_day"] = {
            [](ScenarioConfig& c, std::string_view v) {
                demand_of(c).ethanol_ml_per_day = to_number("demand.ethanol_ml_per_day", v);
            },
            [](const ScenarioConfig& c) { return c.demand ? fmt_num(c.demand->ethanol_ml_per_day) : ""; }};
        k["solver.max_iterations"] = {
            [](ScenarioConfig& c, std::string_view v) {
                if (v.empty())
                    c.solver.max_iterations.reset();
                else
                    c.solver.max_iterations = to_count("solver.max_iterations", v);
            },
            [](const ScenarioConfig& c) {
                return c.solver.max_iterations ? std::to_string(*c.solver.max_iterations) : std::string();
            }};
        k["solver.refactor_interval"] = {
            [](ScenarioConfig& c, std::string_view v) {
                c.solver.refactor_interval = to_count("solver.refactor_interval", v);
            },
            [](const ScenarioConfig& c) { return std::to_string(c.solver.refactor_interval); }};
        k["solver.bland_after"] = {
            [](ScenarioConfig& c, std::string_view v) { c.solver.bland_after = to_count("solver.bland_after", v); },
            [](const ScenarioConfig& c) { return std::to_string(c.solver.bland_after); }};
        k["solver.scale"] = {
            [](ScenarioConfig& c, std::string_view v) { c.solver.scale = to_bool("solver.scale", v); },
            [](const ScenarioConfig& c) { return std::string(c.solver.scale ? "true" : "false"); }};
        return k;
    }();
    return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
    ScenarioConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = csv::trim(text);
        if (text.empty()) continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        auto key = csv::trim(text.substr(0, eq));
        auto value = csv::trim(text.substr(eq + 1));
        auto it = keys().find(key);
        if (it == keys().end()) throw ConfigError(fmt::format("{}:{}: unknown key '{}'", source, line_no, key));
        if (!seen.emplace(key).second)
            throw ConfigError(fmt::format("{}:{}: key '{}' given twice", source, line_no, key));
        try {
            it->second.set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", source, line_no, e.what()));
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open config file '{}'", path.string()));
    return parse_config(in, path.string());
}

std::string write_config(const ScenarioConfig& cfg) {
    std::string out;
    for (const auto& [name, key] : keys()) {
        auto v = key.get(cfg);
        if (v.empty()) continue;
        out += fmt::format("{} = {}\n", name, v);
    }
    return out;
}

}  // namespace bioflow
