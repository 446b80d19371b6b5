#include "bioflow/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bioflow/conversion.hpp"
#include "bioflow/lp/simplex.hpp"

namespace bioflow {

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Potential: return "potential";
        case ScenarioKind::MinCost: return "mincost";
        case ScenarioKind::FullOperation: return "fullop";
        case ScenarioKind::Expansion: return "expand";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) {
    for (auto k : {ScenarioKind::Potential, ScenarioKind::MinCost, ScenarioKind::FullOperation,
                   ScenarioKind::Expansion}) {
        if (text == to_string(k)) return k;
    }
    return std::nullopt;
}

std::size_t ScenarioRun::iterations() const {
    std::size_t n = 0;
    for (const auto& p : passes) n += p.iterations;
    return n;
}

namespace {

using lp::RowSense;
using lp::Term;

std::size_t kind_slot(PlantKind k) { return static_cast<std::size_t>(k); }

Technology new_plant_technology(PlantKind k) {
    if (k == PlantKind::BiomassPower) return Technology::Gasification;
    if (k == PlantKind::BiogasPower) return Technology::AnaerobicDigestion;
    throw ConfigError("new plants can only be biomass-power or biogas-power");
}

DistanceProvider default_distances(const ScenarioConfig& cfg) { return DistanceProvider::haversine(cfg.winding_factor); }

// Largest K/Pmax among existing plants of the kind, else among all power plants.
double inventory_ratio(const Dataset& ds, PlantKind kind) {
    double same = 0.0, any = 0.0;
    bool have_same = false;
    for (const auto& p : ds.plants) {
        if (!is_power(p.kind)) continue;
        double r = p.max_inventory / p.capacity;
        any = std::max(any, r);
        if (p.kind == kind) {
            same = std::max(same, r);
            have_same = true;
        }
    }
    return have_same ? same : any;
}

BuiltModel core(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist,
                const std::vector<CandidateSite>& sites, bool expansion) {
    cfg.validate();
    BuiltModel bm;
    bm.n_suppliers = ds.suppliers.size();
    bm.n_biomass = ds.biomass.size();
    bm.n_months = ds.timegrid.size();
    bm.n_existing = ds.plants.size();
    bm.plants = ds.plants;
    for (const auto& s : sites) {
        Plant p;
        p.plant_id = s.plant_id;
        p.kind = s.kind;
        p.technology = new_plant_technology(s.kind);
        p.holding_cost = cfg.default_holding_cost;
        p.holding_cost_defaulted = true;
        p.location = s.location;
        bm.plants.push_back(std::move(p));
    }
    const std::size_t ns = bm.n_suppliers, nb = bm.n_biomass, np = bm.plants.size(), nt = bm.n_months;
    bm.n_plants = np;
    for (auto k : kPlantKinds) {
        if (!is_power(k)) continue;
        bm.new_inventory_per_mw[kind_slot(k)] = cfg.expansion.inventory_per_mw.value_or(inventory_ratio(ds, k));
    }

    bm.yield.assign(nb * np, 0.0);
    for (std::size_t j = 0; j < np; ++j) {
        const auto& p = bm.plants[j];
        bool any = false;
        for (std::size_t b = 0; b < nb; ++b) {
            auto y = yield_per_ton(ds.biomass[b], p.technology, cfg.efficiencies, p.efficiency_override);
            if (y && *y > 0.0) {
                bm.yield[b * np + j] = *y;
                any = true;
            }
        }
        if (!any)
            throw NoEligibleFeedstock(fmt::format("plant {} ({} q={}) has no eligible feedstock in the dataset",
                                                  p.plant_id, plant_kind_name(p.kind), tech_index(p.technology)));
    }

    bm.km.assign(ns * np, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            bm.km[i * np + j] = j < bm.n_existing ? dist.distance(ds, i, j)
                                                  : dist.distance_to(ds.suppliers[i].location, bm.plants[j].location);
        }
    }
    for (const auto& spec : ds.biomass) bm.unit_transport.push_back(unit_cost(spec, cfg.fleet));
    for (const auto& p : bm.plants) bm.operating_cost.push_back(cfg.operating_cost(p.technology));

    bm.cap.assign(np * nt, 0.0);
    for (std::size_t j = 0; j < np; ++j) {
        const auto& p = bm.plants[j];
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& m = ds.timegrid.months[t];
            double per_unit = is_power(p.kind) ? m.hours * cfg.availability_factor : static_cast<double>(m.days);
            bm.cap[j * nt + t] = j < bm.n_existing ? p.capacity * per_unit : per_unit;
        }
    }

    auto& model = bm.model;
    bm.x_cols.assign(ns * nb * np * nt, kNoColumn);
    bm.u_cols.assign(nb * np * nt, kNoColumn);
    bm.v_cols.assign(nb * np * nt, kNoColumn);
    bm.e_cols.assign(np * nt, kNoColumn);

    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < np; ++j) {
                if (bm.yield_of(b, j) <= 0.0) continue;
                for (std::size_t t = 0; t < nt; ++t)
                    bm.x_cols[((i * nb + b) * np + j) * nt + t] =
                        model.add_variable(fmt::format("x.s{}.b{}.p{}.t{}", i, b, j, t + 1));
            }
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t b = 0; b < nb; ++b) {
            if (bm.yield_of(b, j) <= 0.0) continue;
            for (std::size_t t = 0; t < nt; ++t) {
                bm.u_cols[(b * np + j) * nt + t] = model.add_variable(fmt::format("u.b{}.p{}.t{}", b, j, t + 1));
                bm.v_cols[(b * np + j) * nt + t] = model.add_variable(fmt::format("v.b{}.p{}.t{}", b, j, t + 1));
            }
        }
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t t = 0; t < nt; ++t)
            bm.e_cols[j * nt + t] =
                model.add_variable(fmt::format("e.p{}.t{}", j, t + 1), 0.0, j < bm.n_existing ? bm.cap_of(j, t) : lp::kInf);

    for (std::size_t j = bm.n_existing; j < np; ++j)
        bm.capacity_cols.push_back(
            model.add_variable(fmt::format("P.p{}", j), 0.0, cfg.expansion.max_new_capacity_mw));

    if (expansion) {
        bm.splus_cols.assign(ns * nb, kNoColumn);
        for (std::size_t i = 0; i < ns; ++i)
            for (std::size_t b = 0; b < nb; ++b) {
                bool used = false;
                for (std::size_t j = 0; j < np; ++j) used = used || bm.yield_of(b, j) > 0.0;
                if (used) bm.splus_cols[i * nb + b] = model.add_variable(fmt::format("splus.s{}.b{}", i, b));
            }
    }

    // C1
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t t = 0; t < nt; ++t) {
                std::vector<Term> terms;
                for (std::size_t j = 0; j < np; ++j)
                    if (auto c = bm.x(i, b, j, t); c != kNoColumn) terms.push_back({c, 1.0});
                if (terms.empty()) continue;
                if (expansion && bm.splus_cols[i * nb + b] != kNoColumn)
                    terms.push_back({bm.splus_cols[i * nb + b], -1.0 / static_cast<double>(nt)});
                model.add_constraint(fmt::format("supply.s{}.b{}.t{}", i, b, t + 1), std::move(terms),
                                     RowSense::LessEqual, ds.suppliers[i].availability[b][t]);
            }
    // C2
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t b = 0; b < nb; ++b) {
            if (bm.yield_of(b, j) <= 0.0) continue;
            for (std::size_t t = 0; t < nt; ++t) {
                std::vector<Term> terms{{bm.v(b, j, t), 1.0}};
                if (t > 0) terms.push_back({bm.v(b, j, t - 1), -1.0});
                for (std::size_t i = 0; i < ns; ++i) terms.push_back({bm.x(i, b, j, t), -1.0});
                terms.push_back({bm.u(b, j, t), 1.0});
                model.add_constraint(fmt::format("balance.b{}.p{}.t{}", b, j, t + 1), std::move(terms), RowSense::Equal,
                                     t == 0 ? cfg.initial_inventory : 0.0);
            }
        }
    // C3
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t t = 0; t < nt; ++t) {
            std::vector<Term> terms;
            for (std::size_t b = 0; b < nb; ++b)
                if (auto c = bm.v(b, j, t); c != kNoColumn) terms.push_back({c, 1.0});
            double rhs = bm.plants[j].max_inventory;
            if (bm.is_new(j)) {
                terms.push_back(
                    {bm.capacity_cols[j - bm.n_existing], -bm.new_inventory_per_mw[kind_slot(bm.plants[j].kind)]});
                rhs = 0.0;
            }
            model.add_constraint(fmt::format("stock.p{}.t{}", j, t + 1), std::move(terms), RowSense::LessEqual, rhs);
        }
    // C4
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t t = 0; t < nt; ++t) {
            std::vector<Term> terms{{bm.e(j, t), 1.0}};
            for (std::size_t b = 0; b < nb; ++b)
                if (auto c = bm.u(b, j, t); c != kNoColumn) terms.push_back({c, -bm.yield_of(b, j)});
            model.add_constraint(fmt::format("convert.p{}.t{}", j, t + 1), std::move(terms), RowSense::Equal, 0.0);
        }
    // C5 for new plants; existing plants carry it as a bound on e.
    for (std::size_t j = bm.n_existing; j < np; ++j)
        for (std::size_t t = 0; t < nt; ++t)
            model.add_constraint(fmt::format("output.p{}.t{}", j, t + 1),
                                 {{bm.e(j, t), 1.0}, {bm.capacity_cols[j - bm.n_existing], -bm.cap_of(j, t)}},
                                 RowSense::LessEqual, 0.0);

    bm.cost_objective.assign(model.num_variables(), 0.0);
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < np; ++j)
                for (std::size_t t = 0; t < nt; ++t)
                    if (auto c = bm.x(i, b, j, t); c != kNoColumn)
                        bm.cost_objective[c] = ds.biomass[b].price + bm.unit_transport[b] * bm.km_of(i, j);
    for (std::size_t j = 0; j < np; ++j)
        for (std::size_t t = 0; t < nt; ++t) {
            bm.cost_objective[bm.e(j, t)] = bm.operating_cost[j];
            for (std::size_t b = 0; b < nb; ++b)
                if (auto c = bm.v(b, j, t); c != kNoColumn) bm.cost_objective[c] = bm.plants[j].holding_cost;
        }
    return bm;
}

// Monthly electricity rows per power kind and one annual ethanol row. With
// `as_variables`, the demand level is a column (potential scenario).
void add_demand_rows(BuiltModel& bm, const Dataset& ds, const DemandTargets& targets, bool as_variables) {
    auto& model = bm.model;
    bm.has_demand_rows = true;
    const auto sense = bm.demand_mode == DemandMode::Equality ? RowSense::Equal : RowSense::GreaterEqual;
    const std::size_t nt = bm.n_months;
    for (auto k : kPlantKinds) {
        std::size_t dvar = kNoColumn;
        if (as_variables) {
            static constexpr const char* names[] = {"D.biomass_mw", "D.biogas_mw", "D.ethanol_ml_per_day"};
            dvar = model.add_variable(names[kind_slot(k)], 0.0, targets.of(k));
            bm.demand_vars[kind_slot(k)] = dvar;
        }
        auto plant_terms = [&](std::size_t t) {
            std::vector<Term> terms;
            for (std::size_t j = 0; j < bm.n_plants; ++j)
                if (bm.plants[j].kind == k) terms.push_back({bm.e(j, t), 1.0});
            return terms;
        };
        if (is_power(k)) {
            for (std::size_t t = 0; t < nt; ++t) {
                auto terms = plant_terms(t);
                const double hours = ds.timegrid.months[t].hours;
                double rhs = 0.0;
                if (as_variables)
                    terms.push_back({dvar, -hours});
                else
                    rhs = targets.of(k) * hours;
                if (terms.empty() && rhs == 0.0) continue;
                model.add_constraint(fmt::format("demand.{}.t{}", plant_kind_name(k), t + 1), std::move(terms), sense,
                                     rhs);
            }
        } else {
            std::vector<Term> terms;
            for (std::size_t t = 0; t < nt; ++t) {
                auto more = plant_terms(t);
                terms.insert(terms.end(), more.begin(), more.end());
            }
            const double liters_per_ml_day = 1e6 * static_cast<double>(ds.timegrid.total_days());
            double rhs = 0.0;
            if (as_variables)
                terms.push_back({dvar, -liters_per_ml_day});
            else
                rhs = targets.of(k) * liters_per_ml_day;
            if (terms.empty() && rhs == 0.0) continue;
            model.add_constraint("demand.ethanol.annual", std::move(terms), sense, rhs);
        }
    }
}

lp::Solution solve_pass(const lp::LpModel& model, const ScenarioConfig& cfg, const std::string& name,
                        std::vector<PassResult>& passes) {
    auto sol = lp::solve(model, cfg.solver);
    passes.push_back({name, sol.status, sol.objective, sol.iterations});
    return sol;
}

ScenarioRun expansion_passes(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& targets,
                             const std::vector<CandidateSite>& sites, const DistanceProvider& dist,
                             const std::string& prefix) {
    ScenarioRun run;
    run.sites = sites;
    run.built = build_expansion(ds, cfg, targets, sites, dist);
    run.solution = solve_pass(run.built.model, cfg, prefix + "min-additional-supply", run.passes);
    if (!run.solution.optimal() || run.built.capacity_cols.empty()) return run;

    const double supply = run.solution.objective;
    auto& model = run.built.model;
    std::vector<Term> terms;
    for (auto c : run.built.splus_cols)
        if (c != kNoColumn) terms.push_back({c, 1.0});
    model.add_constraint("additional_supply.total", std::move(terms), RowSense::LessEqual,
                         supply + 1e-6 * (1.0 + supply));
    std::fill(model.objective.begin(), model.objective.end(), 0.0);
    for (auto c : run.built.capacity_cols) model.objective[c] = 1.0;
    run.solution = solve_pass(model, cfg, prefix + "min-new-capacity", run.passes);
    return run;
}

}  // namespace

BuiltModel build_flow_core(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist) {
    return core(ds, cfg, dist, {}, false);
}

BuiltModel build_flow_core(const Dataset& ds, const ScenarioConfig& cfg) {
    return build_flow_core(ds, cfg, default_distances(cfg));
}

BuiltModel build_min_cost(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                          const DistanceProvider& dist) {
    auto bm = core(ds, cfg, dist, {}, false);
    bm.scenario = ScenarioKind::MinCost;
    bm.demands = demands;
    bm.demand_mode = cfg.demand_mode;
    add_demand_rows(bm, ds, demands, false);
    bm.cost_objective.resize(bm.model.num_variables(), 0.0);
    bm.model.objective = bm.cost_objective;
    return bm;
}

BuiltModel build_potential(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist) {
    auto bm = core(ds, cfg, dist, {}, false);
    bm.scenario = ScenarioKind::Potential;
    bm.demands = cfg.demand.value_or(ds.demand);
    bm.demand_mode = cfg.demand_mode;
    add_demand_rows(bm, ds, bm.demands, true);
    bm.cost_objective.resize(bm.model.num_variables(), 0.0);
    auto& model = bm.model;
    model.sense = lp::ObjectiveSense::Maximize;
    const double hours = ds.timegrid.total_hours();
    const double days = static_cast<double>(ds.timegrid.total_days());
    model.objective[bm.demand_vars[kind_slot(PlantKind::BiomassPower)]] = hours;
    model.objective[bm.demand_vars[kind_slot(PlantKind::BiogasPower)]] = hours;
    model.objective[bm.demand_vars[kind_slot(PlantKind::Ethanol)]] = 1e6 * days * kEthanolMwhPerLiter;
    return bm;
}

BuiltModel build_full_operation(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                                const DistanceProvider& dist) {
    auto bm = build_min_cost(ds, cfg, demands, dist);
    bm.scenario = ScenarioKind::FullOperation;
    auto& model = bm.model;
    const std::size_t nt = bm.n_months;
    if (cfg.epsilon_operation > 0.0) {
        for (std::size_t j = 0; j < bm.n_existing; ++j) {
            std::vector<Term> terms;
            double cap = 0.0;
            for (std::size_t t = 0; t < nt; ++t) {
                terms.push_back({bm.e(j, t), 1.0});
                cap += bm.cap_of(j, t);
            }
            model.add_constraint(fmt::format("operate.p{}", j), std::move(terms), RowSense::GreaterEqual,
                                 cfg.epsilon_operation * cap);
        }
    }
    bm.peak_var = model.add_variable("M.peak_inventory");
    for (std::size_t j = 0; j < bm.n_plants; ++j)
        for (std::size_t t = 0; t < nt; ++t) {
            std::vector<Term> terms;
            for (std::size_t b = 0; b < bm.n_biomass; ++b)
                if (auto c = bm.v(b, j, t); c != kNoColumn) terms.push_back({c, 1.0});
            terms.push_back({bm.peak_var, -1.0});
            model.add_constraint(fmt::format("peak.p{}.t{}", j, t + 1), std::move(terms), RowSense::LessEqual, 0.0);
        }
    bm.cost_objective.resize(model.num_variables(), 0.0);
    model.objective = bm.cost_objective;
    return bm;
}

BuiltModel build_expansion(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& targets,
                           const std::vector<CandidateSite>& sites, const DistanceProvider& dist) {
    auto bm = core(ds, cfg, dist, sites, true);
    bm.scenario = ScenarioKind::Expansion;
    bm.demands = targets;
    bm.demand_mode = cfg.demand_mode;
    add_demand_rows(bm, ds, targets, false);
    bm.cost_objective.resize(bm.model.num_variables(), 0.0);
    for (auto c : bm.splus_cols)
        if (c != kNoColumn) bm.model.objective[c] = 1.0;
    return bm;
}

ScenarioRun run_potential(const Dataset& ds, const ScenarioConfig& cfg, const DistanceProvider& dist) {
    ScenarioRun run;
    run.built = build_potential(ds, cfg, dist);
    run.solution = solve_pass(run.built.model, cfg, "max-energy", run.passes);
    return run;
}

ScenarioRun run_min_cost(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                         const DistanceProvider& dist) {
    ScenarioRun run;
    run.built = build_min_cost(ds, cfg, demands, dist);
    run.solution = solve_pass(run.built.model, cfg, "min-cost", run.passes);
    return run;
}

ScenarioRun run_full_operation(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& demands,
                               const DistanceProvider& dist) {
    ScenarioRun run;
    run.built = build_full_operation(ds, cfg, demands, dist);
    auto& model = run.built.model;
    const auto peak = run.built.peak_var;

    std::fill(model.objective.begin(), model.objective.end(), 0.0);
    model.objective[peak] = 1.0;
    run.solution = solve_pass(model, cfg, "min-peak-inventory", run.passes);
    if (!run.solution.optimal()) return run;

    model.variables[peak].upper = run.solution.primal[peak] + 1e-6;
    model.objective = run.built.cost_objective;
    run.solution = solve_pass(model, cfg, "min-cost", run.passes);
    return run;
}

ScenarioRun run_expansion(const Dataset& ds, const ScenarioConfig& cfg, const DemandTargets& targets,
                          const DistanceProvider& dist, const std::optional<std::vector<CandidateSite>>& sites) {
    if (sites) return expansion_passes(ds, cfg, targets, *sites, dist, "");

    // Round 1: one virtual site per power kind at the plain supplier centroid.
    GeoPoint centroid{0.0, 0.0};
    for (const auto& s : ds.suppliers) {
        centroid.lat += s.location.lat / static_cast<double>(ds.suppliers.size());
        centroid.lon += s.location.lon / static_cast<double>(ds.suppliers.size());
    }
    std::vector<CandidateSite> virtual_sites;
    for (auto k : {PlantKind::BiomassPower, PlantKind::BiogasPower}) {
        if (targets.of(k) <= 0.0) continue;
        const auto q = new_plant_technology(k);
        bool feedstock = false;
        for (const auto& b : ds.biomass) {
            auto y = yield_per_ton(b, q, cfg.efficiencies);
            feedstock = feedstock || (y && *y > 0.0);
        }
        if (!feedstock) continue;
        virtual_sites.push_back({fmt::format("NEW-{}", k == PlantKind::BiomassPower ? "BIOMASS" : "BIOGAS"), k, centroid});
    }
    auto first = expansion_passes(ds, cfg, targets, virtual_sites, dist, "siting: ");
    if (!first.optimal()) return first;

    // Round 2: move each site to the center of gravity of its deliveries.
    const auto& bm = first.built;
    const auto& x = first.solution.primal;
    std::vector<CandidateSite> sited;
    for (std::size_t k = 0; k < virtual_sites.size(); ++k) {
        const std::size_t j = bm.n_existing + k;
        if (x[bm.capacity_cols[k]] <= 1e-9) continue;
        std::vector<WeightedPoint> points;
        for (std::size_t i = 0; i < bm.n_suppliers; ++i) {
            double w = 0.0;
            for (std::size_t b = 0; b < bm.n_biomass; ++b)
                for (std::size_t t = 0; t < bm.n_months; ++t)
                    if (auto c = bm.x(i, b, j, t); c != kNoColumn) w += std::max(0.0, x[c]) * bm.unit_transport[b];
            points.push_back({ds.suppliers[i].location, w});
        }
        try {
            sited.push_back({virtual_sites[k].plant_id, virtual_sites[k].kind, center_of_gravity(points)});
        } catch (const AllZeroWeights&) {
            // Capacity without deliveries: nothing to site.
        }
    }
    auto second = expansion_passes(ds, cfg, targets, sited, dist, "");
    second.passes.insert(second.passes.begin(), first.passes.begin(), first.passes.end());
    return second;
}

GeoPoint center_of_gravity(const std::vector<WeightedPoint>& points) {
    double w = 0.0, lat = 0.0, lon = 0.0;
    for (const auto& p : points) {
        if (p.weight < 0.0 || !std::isfinite(p.weight)) throw AllZeroWeights("weights must be finite and >= 0");
        w += p.weight;
        lat += p.weight * p.location.lat;
        lon += p.weight * p.location.lon;
    }
    if (!(w > 0.0)) throw AllZeroWeights("center of gravity needs at least one positive weight");
    return {lat / w, lon / w};
}

double sugarcane_equivalent(double molasses_tons, const ScenarioConfig& cfg) {
    return molasses_tons / cfg.molasses_per_sugarcane;
}

}  // namespace bioflow
