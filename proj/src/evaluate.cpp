#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bioflow/conversion.hpp"
#include "bioflow/scenarios.hpp"

namespace bioflow {

double population_variance(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size());
}

double cost_increase(double base, double other) { return other / base - 1.0; }

double FlowResiduals::worst_c1_c5() const { return std::max({supply, balance, inventory, conversion, capacity}); }

namespace {

double value(const std::vector<double>& x, std::size_t col) { return col == kNoColumn ? 0.0 : x[col]; }

EnergyCarrier carrier(PlantKind k) { return is_power(k) ? EnergyCarrier::Electricity : EnergyCarrier::Ethanol; }

// Un-derated capacity of plant j in month t, in output units.
double nameplate(const BuiltModel& bm, const Dataset& ds, const std::vector<double>& x, std::size_t j,
                 std::size_t t) {
    const auto& p = bm.plants[j];
    const auto& m = ds.timegrid.months[t];
    double capacity = bm.is_new(j) ? value(x, bm.capacity_cols[j - bm.n_existing]) : p.capacity;
    return capacity * (is_power(p.kind) ? m.hours : static_cast<double>(m.days));
}

double inventory_cap(const BuiltModel& bm, const std::vector<double>& x, std::size_t j) {
    if (!bm.is_new(j)) return bm.plants[j].max_inventory;
    return bm.new_inventory_per_mw[static_cast<std::size_t>(bm.plants[j].kind)] *
           value(x, bm.capacity_cols[j - bm.n_existing]);
}

}  // namespace

ScenarioReport evaluate(const BuiltModel& bm, const lp::Solution& sol, const Dataset& ds, const ScenarioConfig& cfg) {
    if (!sol.optimal())
        throw NonOptimalSolution(fmt::format("cannot evaluate a {} solution", lp::to_string(sol.status)));
    const auto& x = sol.primal;
    const std::size_t ns = bm.n_suppliers, nb = bm.n_biomass, np = bm.n_plants, nt = bm.n_months;

    ScenarioReport r;
    r.scenario = bm.scenario;
    r.demand_mode = bm.demand_mode;
    r.objective = sol.objective;
    r.iterations = sol.iterations;
    r.targets = bm.demands;

    // Costs
    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < np; ++j)
                for (std::size_t t = 0; t < nt; ++t) {
                    double q = value(x, bm.x(i, b, j, t));
                    r.cost.biomass += ds.biomass[b].price * q;
                    r.cost.transport += bm.unit_transport[b] * bm.km_of(i, j) * q;
                }
    for (std::size_t j = 0; j < np; ++j) {
        if (bm.plants[j].holding_cost_defaulted && !bm.is_new(j)) r.holding_cost_defaulted = true;
        for (std::size_t t = 0; t < nt; ++t) {
            r.cost.operating += bm.operating_cost[j] * value(x, bm.e(j, t));
            for (std::size_t b = 0; b < nb; ++b) r.cost.holding += bm.plants[j].holding_cost * value(x, bm.v(b, j, t));
        }
    }

    // Per-plant metrics
    std::array<std::vector<double>, 3> utilization, variance;
    std::vector<double> all_util, all_var;
    for (std::size_t j = 0; j < np; ++j) {
        const auto& p = bm.plants[j];
        auto& ks = r.kinds[static_cast<std::size_t>(p.kind)];
        ++ks.plants;
        double out = 0.0, cap = 0.0;
        std::vector<double> stock(nt, 0.0);
        const double K = inventory_cap(bm, x, j);
        for (std::size_t t = 0; t < nt; ++t) {
            double e = value(x, bm.e(j, t));
            out += e;
            cap += nameplate(bm, ds, x, j, t);
            for (std::size_t b = 0; b < nb; ++b) stock[t] += value(x, bm.v(b, j, t));
            r.production.push_back({p.plant_id, p.kind, t + 1, e});
            r.inventory.push_back({p.plant_id, t + 1, stock[t]});
            ks.peak_inventory = std::max(ks.peak_inventory, stock[t]);
            if (K > 0.0) {
                utilization[static_cast<std::size_t>(p.kind)].push_back(stock[t] / K);
                all_util.push_back(stock[t] / K);
            }
        }
        if (out > 1e-6) ++ks.operating;
        ks.output += out;
        ks.nameplate += cap;
        ks.energy_mwh += mwh_equivalent(carrier(p.kind), std::max(0.0, out));
        r.overall.nameplate += mwh_equivalent(carrier(p.kind), std::max(0.0, cap));
        double var = population_variance(stock);
        variance[static_cast<std::size_t>(p.kind)].push_back(var);
        all_var.push_back(var);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double a : v) s += a;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    for (std::size_t k = 0; k < 3; ++k) {
        auto& ks = r.kinds[k];
        ks.capacity_factor = ks.nameplate > 0.0 ? ks.output / ks.nameplate : 0.0;
        ks.operation_rate = ks.plants ? static_cast<double>(ks.operating) / static_cast<double>(ks.plants) : 0.0;
        ks.inventory_utilization = mean(utilization[k]);
        ks.inventory_variance = mean(variance[k]);
        r.overall.plants += ks.plants;
        r.overall.operating += ks.operating;
        r.overall.output += ks.energy_mwh;
        r.overall.energy_mwh += ks.energy_mwh;
        r.overall.peak_inventory = std::max(r.overall.peak_inventory, ks.peak_inventory);
    }
    r.overall.capacity_factor = r.overall.nameplate > 0.0 ? r.overall.output / r.overall.nameplate : 0.0;
    r.overall.operation_rate =
        r.overall.plants ? static_cast<double>(r.overall.operating) / static_cast<double>(r.overall.plants) : 0.0;
    r.overall.inventory_utilization = mean(all_util);
    r.overall.inventory_variance = mean(all_var);
    r.total_twh = r.overall.energy_mwh / 1e6;

    // Biomass usage against availability (including any additional supply)
    for (std::size_t b = 0; b < nb; ++b) {
        double extra = 0.0;
        if (!bm.splus_cols.empty())
            for (std::size_t i = 0; i < ns; ++i) extra += value(x, bm.splus_cols[i * nb + b]);
        for (std::size_t t = 0; t < nt; ++t) {
            double used = 0.0, avail = extra / static_cast<double>(nt);
            for (std::size_t j = 0; j < np; ++j) used += value(x, bm.u(b, j, t));
            for (std::size_t i = 0; i < ns; ++i) avail += ds.suppliers[i].availability[b][t];
            r.biomass_usage.push_back({std::string(biomass_name(ds.biomass[b].id)), t + 1, used, avail});
        }
        if (extra > 0.0) {
            r.additional_supply.push_back({std::string(biomass_name(ds.biomass[b].id)), extra});
            r.additional_supply_total += extra;
            if (ds.biomass[b].id == Biomass::Molasses) r.sugarcane_equivalent_tons = sugarcane_equivalent(extra, cfg);
        }
    }

    if (bm.demand_vars[0] != kNoColumn) {
        r.achieved_demand = DemandTargets{x[bm.demand_vars[0]], x[bm.demand_vars[1]], x[bm.demand_vars[2]]};
    }
    if (bm.peak_var != kNoColumn) r.peak_bound = x[bm.peak_var];
    for (std::size_t k = 0; k < bm.capacity_cols.size(); ++k) {
        const auto& p = bm.plants[bm.n_existing + k];
        r.new_plants.push_back({p.plant_id, p.kind, p.location, x[bm.capacity_cols[k]]});
    }
    return r;
}

ScenarioReport evaluate(const ScenarioRun& run, const Dataset& ds, const ScenarioConfig& cfg) {
    auto r = evaluate(run.built, run.solution, ds, cfg);
    r.iterations = run.iterations();
    return r;
}

FlowResiduals check_flow(const BuiltModel& bm, const lp::Solution& sol, const Dataset& ds, const ScenarioConfig& cfg) {
    const auto& x = sol.primal;
    const std::size_t ns = bm.n_suppliers, nb = bm.n_biomass, np = bm.n_plants, nt = bm.n_months;
    FlowResiduals r;
    auto worse = [](double& slot, double v) { slot = std::max(slot, v); };
    auto nonneg = [&](std::size_t col) {
        if (col != kNoColumn) worse(r.negativity, -x[col]);
    };

    for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t b = 0; b < nb; ++b) {
            double extra = bm.splus_cols.empty() ? 0.0 : value(x, bm.splus_cols[i * nb + b]);
            for (std::size_t t = 0; t < nt; ++t) {
                double shipped = 0.0;
                for (std::size_t j = 0; j < np; ++j) {
                    shipped += value(x, bm.x(i, b, j, t));
                    nonneg(bm.x(i, b, j, t));
                }
                worse(r.supply, shipped - ds.suppliers[i].availability[b][t] - extra / static_cast<double>(nt));
            }
        }

    for (std::size_t j = 0; j < np; ++j) {
        const auto& p = bm.plants[j];
        const double K = inventory_cap(bm, x, j);
        double scale = 1.0;
        std::vector<double> imbalance(nb, 0.0);
        for (std::size_t t = 0; t < nt; ++t) {
            double stock = 0.0, made = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                if (bm.u(b, j, t) == kNoColumn) continue;
                double in = 0.0;
                for (std::size_t i = 0; i < ns; ++i) in += value(x, bm.x(i, b, j, t));
                const double u = x[bm.u(b, j, t)], v = x[bm.v(b, j, t)];
                const double prev = t == 0 ? cfg.initial_inventory : x[bm.v(b, j, t - 1)];
                worse(r.balance, std::abs(v - (prev + in - u)));
                imbalance[b] += in - u;
                scale = std::max({scale, std::abs(in), std::abs(u), std::abs(v)});
                stock += v;
                nonneg(bm.u(b, j, t));
                nonneg(bm.v(b, j, t));
                // Yield recomputed from the conversion tables, not the model.
                auto y = yield_per_ton(ds.biomass[b], p.technology, cfg.efficiencies, p.efficiency_override);
                made += y.value_or(0.0) * u;
            }
            worse(r.inventory, stock - K);
            const double e = x[bm.e(j, t)];
            nonneg(bm.e(j, t));
            worse(r.conversion, std::abs(e - made));
            const auto& m = ds.timegrid.months[t];
            double capacity = bm.is_new(j) ? value(x, bm.capacity_cols[j - bm.n_existing]) : p.capacity;
            double limit = is_power(p.kind) ? capacity * m.hours * cfg.availability_factor
                                            : capacity * static_cast<double>(m.days);
            worse(r.capacity, e - limit);
        }
        for (std::size_t b = 0; b < nb; ++b) {
            if (bm.u(b, j, 0) == kNoColumn) continue;
            const double delta = x[bm.v(b, j, nt - 1)] - cfg.initial_inventory;
            worse(r.conservation, std::abs(imbalance[b] - delta) / scale);
        }
    }

    // Demand, in the configured sense.
    for (auto k : kPlantKinds) {
        if (!bm.has_demand_rows) break;
        const auto slot = static_cast<std::size_t>(k);
        const double level = bm.demand_vars[slot] != kNoColumn ? x[bm.demand_vars[slot]] : bm.demands.of(k);
        auto check = [&](double produced, double target) {
            double miss = bm.demand_mode == DemandMode::Equality ? std::abs(produced - target) : target - produced;
            worse(r.demand, miss / (1.0 + std::abs(target)));
        };
        if (is_power(k)) {
            for (std::size_t t = 0; t < nt; ++t) {
                double produced = 0.0;
                for (std::size_t j = 0; j < np; ++j)
                    if (bm.plants[j].kind == k) produced += x[bm.e(j, t)];
                check(produced, level * ds.timegrid.months[t].hours);
            }
        } else {
            double produced = 0.0;
            for (std::size_t j = 0; j < np; ++j)
                if (bm.plants[j].kind == k)
                    for (std::size_t t = 0; t < nt; ++t) produced += x[bm.e(j, t)];
            check(produced, level * 1e6 * ds.timegrid.total_days());
        }
    }
    return r;
}

}  // namespace bioflow
