#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"

#include "bioflow/conversion.hpp"
#include "bioflow/lp/simplex.hpp"
#include "bioflow/scenarios.hpp"

using namespace bioflow;

namespace {

Plant make_plant(std::string id, PlantKind kind, Technology q, double capacity, double k, GeoPoint at = {13.0, 100.0}) {
    Plant p;
    p.plant_id = std::move(id);
    p.kind = kind;
    p.technology = q;
    p.capacity = capacity;
    p.max_inventory = k;
    p.holding_cost = 40.0;
    p.location = at;
    return p;
}

SupplierProfile make_supplier(int id, GeoPoint at, std::vector<std::vector<double>> availability) {
    SupplierProfile s;
    s.province_id = id;
    s.name = "s" + std::to_string(id);
    s.location = at;
    s.availability = std::move(availability);
    return s;
}

// Flat supply of `tons` per month for every biomass.
Dataset flat_dataset(std::vector<Biomass> biomass, std::size_t n_suppliers, std::vector<Plant> plants,
                     std::size_t months, double tons) {
    Dataset ds;
    ds.timegrid = months == 12 ? TimeGrid::civil_year() : TimeGrid::first_months(months);
    for (auto b : biomass) ds.biomass.push_back(builtin_biomass(b));
    for (std::size_t i = 0; i < n_suppliers; ++i)
        ds.suppliers.push_back(make_supplier(static_cast<int>(i + 1), {13.0 + 0.5 * static_cast<double>(i), 100.5},
                                             std::vector<std::vector<double>>(biomass.size(),
                                                                              std::vector<double>(months, tons))));
    ds.plants = std::move(plants);
    ds.demand = {};
    return ds;
}

const DistanceProvider kHaversine = DistanceProvider::haversine();

std::vector<std::size_t> all_columns(const BuiltModel& bm) {
    std::vector<std::size_t> cols;
    auto take = [&](const std::vector<std::size_t>& v) {
        for (auto c : v)
            if (c != kNoColumn) cols.push_back(c);
    };
    take(bm.x_cols);
    take(bm.u_cols);
    take(bm.v_cols);
    take(bm.e_cols);
    take(bm.splus_cols);
    take(bm.capacity_cols);
    for (auto c : bm.demand_vars)
        if (c != kNoColumn) cols.push_back(c);
    if (bm.peak_var != kNoColumn) cols.push_back(bm.peak_var);
    std::sort(cols.begin(), cols.end());
    return cols;
}

void check_column_maps(const BuiltModel& bm) {
    auto cols = all_columns(bm);
    REQUIRE(cols.size() == bm.model.num_variables());
    for (std::size_t k = 0; k < cols.size(); ++k) CHECK(cols[k] == k);
}

double sum_x(const ScenarioRun& run, std::size_t j) {
    const auto& bm = run.built;
    double s = 0.0;
    for (std::size_t i = 0; i < bm.n_suppliers; ++i)
        for (std::size_t b = 0; b < bm.n_biomass; ++b)
            for (std::size_t t = 0; t < bm.n_months; ++t)
                if (auto c = bm.x(i, b, j, t); c != kNoColumn) s += run.solution.primal[c];
    return s;
}

double first_pass_objective(const ScenarioRun& run) {
    REQUIRE(!run.passes.empty());
    return run.passes.front().objective;
}

}  // namespace

TEST_SUITE("scenarios.build") {
    TEST_CASE("two suppliers, two biomass, two plants, three months give 54 columns") {
        auto ds = flat_dataset({Biomass::RiceStraw, Biomass::Bagasse}, 2,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 1.0, 500),
                                make_plant("B", PlantKind::BiomassPower, Technology::DirectFiring, 1.0, 500)},
                               3, 100.0);
        auto bm = build_flow_core(ds, ScenarioConfig{}, kHaversine);
        CHECK(bm.x_cols.size() == 24);
        CHECK(bm.u_cols.size() == 12);
        CHECK(bm.v_cols.size() == 12);
        CHECK(bm.e_cols.size() == 6);
        CHECK(bm.model.num_variables() == 54);
        // supply 12 + balance 12 + stock 6 + conversion 6
        CHECK(bm.model.num_constraints() == 36);
        check_column_maps(bm);
        CHECK(lp::check_model(bm.model).empty());
    }

    TEST_CASE("ineligible pairs get no shipment or consumption columns") {
        auto ds = flat_dataset({Biomass::RiceStraw, Biomass::Molasses}, 2,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 1.0, 500),
                                make_plant("B", PlantKind::BiomassPower, Technology::DirectFiring, 1.0, 500)},
                               3, 100.0);
        auto bm = build_flow_core(ds, ScenarioConfig{}, kHaversine);
        CHECK(bm.model.num_variables() == 12 + 6 + 6 + 6);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t t = 0; t < 3; ++t) CHECK(bm.x(i, 1, j, t) == kNoColumn);
        check_column_maps(bm);
    }

    TEST_CASE("a plant with no usable feedstock is rejected") {
        auto ds = flat_dataset({Biomass::RiceStraw}, 1,
                               {make_plant("E", PlantKind::Ethanol, Technology::Fermentation, 1000, 500)}, 3, 100.0);
        CHECK_THROWS_AS(build_flow_core(ds, ScenarioConfig{}, kHaversine), NoEligibleFeedstock);
    }

    TEST_CASE("production caps are derated bounds on output") {
        auto ds = flat_dataset({Biomass::RiceStraw}, 1,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 2.0, 500),
                                make_plant("E", PlantKind::Ethanol, Technology::Fermentation, 1000, 500)},
                               2, 100.0);
        ds.biomass.push_back(builtin_biomass(Biomass::Molasses));
        for (auto& s : ds.suppliers) s.availability.push_back({50.0, 50.0});
        ScenarioConfig cfg;
        auto bm = build_flow_core(ds, cfg, kHaversine);
        CHECK(bm.model.variables[bm.e(0, 0)].upper == doctest::Approx(2.0 * 744 * cfg.availability_factor));
        CHECK(bm.model.variables[bm.e(0, 1)].upper == doctest::Approx(2.0 * 672 * cfg.availability_factor));
        CHECK(bm.model.variables[bm.e(1, 1)].upper == doctest::Approx(1000.0 * 28));
    }

    TEST_CASE("building is deterministic") {
        auto ds = synth_dataset(11, 3, 4, 5);
        ScenarioConfig cfg;
        CHECK(build_min_cost(ds, cfg, ds.demand, kHaversine).model ==
              build_min_cost(ds, cfg, ds.demand, kHaversine).model);
        CHECK(build_full_operation(ds, cfg, ds.demand, kHaversine).model ==
              build_full_operation(ds, cfg, ds.demand, kHaversine).model);
    }

    TEST_CASE("every scenario maps each column exactly once") {
        auto ds = synth_dataset(5, 3, 4, 5);
        ScenarioConfig cfg;
        check_column_maps(build_min_cost(ds, cfg, ds.demand, kHaversine));
        check_column_maps(build_potential(ds, cfg, kHaversine));
        check_column_maps(build_full_operation(ds, cfg, ds.demand, kHaversine));
        check_column_maps(build_expansion(
            ds, cfg, ds.demand, {{"N1", PlantKind::BiomassPower, {14.0, 101.0}}, {"N2", PlantKind::BiogasPower, {15.0, 100.0}}},
            kHaversine));
    }
}

TEST_SUITE("scenarios.flow") {
    TEST_CASE("balance carries unused supply into stock") {
        auto ds = flat_dataset({Biomass::RiceStraw}, 1,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 5.0, 100)}, 1, 10.0);
        auto bm = build_flow_core(ds, ScenarioConfig{}, kHaversine);
        auto& m = bm.model;
        m.variables[bm.x(0, 0, 0, 0)].lower = m.variables[bm.x(0, 0, 0, 0)].upper = 10.0;
        m.variables[bm.u(0, 0, 0)].lower = m.variables[bm.u(0, 0, 0)].upper = 4.0;
        auto sol = lp::solve(m);
        REQUIRE(sol.optimal());
        CHECK(sol.primal[bm.v(0, 0, 0)] == doctest::Approx(6.0));
    }

    TEST_CASE("no feedstock and positive demand is infeasible") {
        auto ds = flat_dataset({Biomass::RiceStraw}, 2,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 5.0, 100)}, 3, 0.0);
        auto run = run_min_cost(ds, ScenarioConfig{}, {1.0, 0.0, 0.0}, kHaversine);
        CHECK(run.solution.status == lp::SolveStatus::Infeasible);
        CHECK_THROWS_AS(evaluate(run, ds, ScenarioConfig{}), NonOptimalSolution);
    }

    TEST_CASE("zero demand costs nothing") {
        auto ds = synth_dataset(3, 3, 4, 5);
        ScenarioConfig cfg;
        auto run = run_min_cost(ds, cfg, {}, kHaversine);
        REQUIRE(run.optimal());
        CHECK(run.solution.objective == doctest::Approx(0.0));
        for (double v : run.solution.primal) CHECK(std::abs(v) <= 1e-9);
        auto rep = evaluate(run, ds, cfg);
        CHECK(rep.cost.total() == doctest::Approx(0.0));
        CHECK(rep.overall.operation_rate == 0.0);
    }

    TEST_CASE("shipments go to the nearer of two identical plants") {
        auto ds = flat_dataset({Biomass::RiceStraw}, 1,
                               {make_plant("NEAR", PlantKind::BiomassPower, Technology::DirectFiring, 5.0, 100),
                                make_plant("FAR", PlantKind::BiomassPower, Technology::DirectFiring, 5.0, 100)},
                               3, 1000.0);
        DistanceMatrix dm{{{50.0, 100.0}}};
        auto dist = DistanceProvider::matrix(dm);
        auto run = run_min_cost(ds, ScenarioConfig{}, {1.0, 0.0, 0.0}, dist);
        REQUIRE(run.optimal());
        CHECK(sum_x(run, 0) > 0.0);
        CHECK(sum_x(run, 1) == doctest::Approx(0.0));

        // Oracle: per ton delivered, the near assignment costs the price plus 50 km of haulage.
        const auto& rs = ds.biomass[0];
        const double per_ton_near = rs.price + unit_cost(rs) * 50.0;
        const double per_ton_far = rs.price + unit_cost(rs) * 100.0;
        CHECK(per_ton_near < per_ton_far);
        auto rep = evaluate(run, ds, ScenarioConfig{});
        CHECK(rep.cost.biomass + rep.cost.transport == doctest::Approx(per_ton_near * sum_x(run, 0)));
    }

    TEST_CASE("demand slightly above capacity is infeasible") {
        auto ds = flat_dataset({Biomass::RiceStraw}, 2,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 2.0, 100)}, 3, 1e5);
        ScenarioConfig cfg;
        auto ok = run_min_cost(ds, cfg, {2.0 * cfg.availability_factor, 0.0, 0.0}, kHaversine);
        CHECK(ok.optimal());
        auto over = run_min_cost(ds, cfg, {2.0 * cfg.availability_factor * 1.001, 0.0, 0.0}, kHaversine);
        CHECK(over.solution.status == lp::SolveStatus::Infeasible);
    }

    TEST_CASE("at-least demand rows hold with nonnegative slack") {
        auto ds = synth_dataset(7, 6, 5, 8);
        ScenarioConfig cfg;
        cfg.demand_mode = DemandMode::AtLeast;
        auto run = run_min_cost(ds, cfg, ds.demand, kHaversine);
        REQUIRE(run.optimal());
        const auto& m = run.built.model;
        std::size_t demand_rows = 0;
        for (std::size_t r = 0; r < m.num_constraints(); ++r) {
            if (m.constraints[r].name.rfind("demand.", 0) != 0) continue;
            ++demand_rows;
            CHECK(m.constraints[r].sense == lp::RowSense::GreaterEqual);
            const double scale = 1.0 + std::abs(m.constraints[r].rhs);
            CHECK(m.row_activity(r, run.solution.primal) - m.constraints[r].rhs >= -1e-6 * scale);
        }
        CHECK(demand_rows == 2 * 12 + 1);
        auto res = check_flow(run.built, run.solution, ds, cfg);
        CHECK(res.demand <= 1e-6);
    }
}

TEST_SUITE("scenarios.desk") {
    // One desk instance shared by the cases below.
    struct Desk {
        Dataset ds = synth_dataset(7, 6, 5, 8);
        ScenarioConfig cfg;
        ScenarioRun min_cost = run_min_cost(ds, cfg, ds.demand, kHaversine);
        ScenarioRun full_op = run_full_operation(ds, cfg, ds.demand, kHaversine);
        ScenarioRun potential = run_potential(ds, cfg, kHaversine);
    };
    const Desk& desk() {
        static const Desk d;
        return d;
    }

    TEST_CASE("every desk run is optimal with an accepted certificate") {
        const auto& d = desk();
        for (const ScenarioRun* run : {&d.min_cost, &d.full_op, &d.potential}) {
            REQUIRE(run->optimal());
            auto cert = lp::check_certificate(run->built.model, run->solution);
            CHECK(cert.accepted());
        }
    }

    TEST_CASE("flow residuals and conservation") {
        const auto& d = desk();
        for (const ScenarioRun* run : {&d.min_cost, &d.full_op, &d.potential}) {
            auto res = check_flow(run->built, run->solution, d.ds, d.cfg);
            CHECK(res.worst_c1_c5() <= 1e-6);
            CHECK(res.conservation <= 1e-9);
            CHECK(res.negativity <= 1e-6);
            CHECK(res.demand <= 1e-6);
        }
    }

    TEST_CASE("cost breakdown reproduces the objective") {
        const auto& d = desk();
        for (const ScenarioRun* run : {&d.min_cost, &d.full_op}) {
            auto rep = evaluate(*run, d.ds, d.cfg);
            CHECK(std::abs(rep.cost.total() - run->solution.objective) <= 1e-6 * std::abs(run->solution.objective));
            for (const auto& k : rep.kinds) {
                CHECK(k.capacity_factor >= 0.0);
                CHECK(k.capacity_factor <= 1.0);
            }
            CHECK(rep.overall.capacity_factor <= 1.0);
        }
    }

    TEST_CASE("full operation runs every plant, lowers the peak and costs at least as much") {
        const auto& d = desk();
        auto mc = evaluate(d.min_cost, d.ds, d.cfg);
        auto fo = evaluate(d.full_op, d.ds, d.cfg);
        CHECK(fo.overall.operation_rate == 1.0);
        CHECK(fo.overall.peak_inventory <= mc.overall.peak_inventory + 1e-6);
        CHECK(fo.cost.total() >= mc.cost.total() * (1.0 - 1e-9));
        REQUIRE(fo.peak_bound.has_value());
        CHECK(fo.overall.peak_inventory <= *fo.peak_bound + 1e-6);
        REQUIRE(d.full_op.passes.size() == 2);
        CHECK(d.full_op.passes[0].name == "min-peak-inventory");
    }

    TEST_CASE("potential demand variables stay within their caps") {
        const auto& d = desk();
        auto rep = evaluate(d.potential, d.ds, d.cfg);
        REQUIRE(rep.achieved_demand.has_value());
        for (auto k : kPlantKinds) {
            CHECK(rep.achieved_demand->of(k) >= -1e-9);
            CHECK(rep.achieved_demand->of(k) <= d.ds.demand.of(k) * (1.0 + 1e-9));
        }
    }

    TEST_CASE("expansion needs no extra supply at the potential and some above it") {
        const auto& d = desk();
        auto achieved = *evaluate(d.potential, d.ds, d.cfg).achieved_demand;
        auto at = run_expansion(d.ds, d.cfg, achieved, kHaversine);
        REQUIRE(at.optimal());
        CHECK(evaluate(at, d.ds, d.cfg).additional_supply_total <= 1e-6);

        DemandTargets above = achieved;
        above.biomass_mw = achieved.biomass_mw * 1.5 + 1.0;
        above.biogas_mw = achieved.biogas_mw * 1.5 + 0.5;
        auto up = run_expansion(d.ds, d.cfg, above, kHaversine);
        REQUIRE(up.optimal());
        auto rep = evaluate(up, d.ds, d.cfg);
        CHECK(rep.additional_supply_total > 0.0);
        REQUIRE(!rep.new_plants.empty());
        CHECK(std::any_of(rep.new_plants.begin(), rep.new_plants.end(),
                          [](const NewPlantSummary& p) { return p.capacity_mw > 0.0; }));
        auto res = check_flow(up.built, up.solution, d.ds, d.cfg);
        CHECK(res.worst_c1_c5() <= 1e-6);
        CHECK(res.conservation <= 1e-9);
    }
}

TEST_SUITE("scenarios.properties") {
    TEST_CASE("full operation with no floor costs the same as min-cost when stock is not needed") {
        // Flat supply well above need: the cheapest plan holds no stock, so the
        // peak cap from pass 1 does not bind.
        auto ds = flat_dataset({Biomass::RiceStraw, Biomass::Bagasse}, 3,
                               {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 2.0, 800),
                                make_plant("B", PlantKind::BiomassPower, Technology::CoGeneration, 1.5, 800)},
                               12, 2000.0);
        ScenarioConfig cfg;
        cfg.epsilon_operation = 0.0;
        const DemandTargets dem{2.0, 0.0, 0.0};
        auto mc = run_min_cost(ds, cfg, dem, kHaversine);
        auto fo = run_full_operation(ds, cfg, dem, kHaversine);
        REQUIRE(mc.optimal());
        REQUIRE(fo.optimal());
        CHECK(std::abs(fo.solution.objective - mc.solution.objective) <= 1e-6 * mc.solution.objective);
    }

    TEST_CASE("abundant supply drives the potential to the national targets") {
        const auto targets = aedp_targets();
        Dataset ds = flat_dataset({Biomass::RiceStraw, Biomass::Molasses}, 2,
                                  {make_plant("B", PlantKind::BiomassPower, Technology::CoGeneration, 5000, 1e6),
                                   make_plant("G", PlantKind::BiogasPower, Technology::AnaerobicDigestion, 500, 1e8),
                                   make_plant("E", PlantKind::Ethanol, Technology::Fermentation, 6e6, 1e6)},
                                  12, 5e7);
        ds.demand = targets;
        ScenarioConfig cfg;
        auto run = run_potential(ds, cfg, kHaversine);
        REQUIRE(run.optimal());
        auto rep = evaluate(run, ds, cfg);
        CHECK(rep.achieved_demand->biomass_mw == doctest::Approx(3940.0).epsilon(1e-9));
        CHECK(rep.achieved_demand->biogas_mw == doctest::Approx(387.0).epsilon(1e-9));
        CHECK(rep.achieved_demand->ethanol_ml_per_day == doctest::Approx(4.79).epsilon(1e-9));
        auto res = check_flow(run.built, run.solution, ds, cfg);
        CHECK(res.conservation <= 1e-9);
    }

    TEST_CASE("without biogas feedstock the biogas potential is zero") {
        Dataset ds = flat_dataset({Biomass::OilPalmShell, Biomass::Molasses}, 2,
                                  {make_plant("B", PlantKind::BiomassPower, Technology::DirectFiring, 3, 1000),
                                   make_plant("E", PlantKind::Ethanol, Technology::Fermentation, 20000, 1000)},
                                  12, 500);
        ds.demand = {10.0, 10.0, 1.0};
        ScenarioConfig cfg;
        auto run = run_potential(ds, cfg, kHaversine);
        REQUIRE(run.optimal());
        auto rep = evaluate(run, ds, cfg);
        CHECK(rep.achieved_demand->biogas_mw == 0.0);
        CHECK(rep.achieved_demand->biomass_mw > 0.0);
    }

    TEST_CASE("halving plant capacity halves the electricity potential") {
        auto make = [](double scale) {
            Dataset ds = flat_dataset({Biomass::RiceStraw, Biomass::Bagasse}, 3,
                                      {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 4 * scale, 1e5),
                                       make_plant("B", PlantKind::BiomassPower, Technology::Gasification, 2 * scale, 1e5),
                                       make_plant("G", PlantKind::BiogasPower, Technology::AnaerobicDigestion, 0.2 * scale, 1e7)},
                                      12, 1e6);
            ds.demand = {100.0, 100.0, 0.0};
            return ds;
        };
        ScenarioConfig cfg;
        auto full_ds = make(1.0), half_ds = make(0.5);
        auto full = evaluate(run_potential(full_ds, cfg, kHaversine), full_ds, cfg);
        auto half = evaluate(run_potential(half_ds, cfg, kHaversine), half_ds, cfg);
        const double e_full = (full.achieved_demand->biomass_mw + full.achieved_demand->biogas_mw) * 8760.0;
        const double e_half = (half.achieved_demand->biomass_mw + half.achieved_demand->biogas_mw) * 8760.0;
        CHECK(e_full > 0.0);
        CHECK(e_half == doctest::Approx(0.5 * e_full).epsilon(1e-9));
    }

    TEST_CASE("more supply never needs more additional supply") {
        auto ds = synth_dataset(4, 4, 5, 6);
        ScenarioConfig cfg;
        std::vector<CandidateSite> sites{{"N1", PlantKind::BiomassPower, {14.0, 101.0}},
                                         {"N2", PlantKind::BiogasPower, {15.0, 100.5}}};
        DemandTargets targets{ds.demand.biomass_mw * 3.0, ds.demand.biogas_mw * 3.0, ds.demand.ethanol_ml_per_day};
        auto base = run_expansion(ds, cfg, targets, kHaversine, sites);
        REQUIRE(base.optimal());

        auto doubled = ds;
        for (auto& s : doubled.suppliers)
            for (auto& row : s.availability)
                for (auto& a : row) a *= 2.0;
        auto more = run_expansion(doubled, cfg, targets, kHaversine, sites);
        REQUIRE(more.optimal());
        CHECK(first_pass_objective(base) > 0.0);
        CHECK(first_pass_objective(more) <= first_pass_objective(base) * (1.0 + 1e-9) + 1e-6);
    }

    TEST_CASE("higher targets never need less additional supply") {
        auto ds = synth_dataset(4, 4, 5, 6);
        ScenarioConfig cfg;
        std::vector<CandidateSite> sites{{"N1", PlantKind::BiomassPower, {14.0, 101.0}},
                                         {"N2", PlantKind::BiogasPower, {15.0, 100.5}}};
        double previous = -1.0;
        for (double f : {1.0, 2.0, 3.0, 4.0}) {
            DemandTargets t{ds.demand.biomass_mw * f, ds.demand.biogas_mw * f, ds.demand.ethanol_ml_per_day};
            auto run = run_expansion(ds, cfg, t, kHaversine, sites);
            REQUIRE(run.optimal());
            const double s = first_pass_objective(run);
            CHECK(s >= previous - 1e-6 * (1.0 + std::abs(previous)));
            previous = s;
        }
        CHECK(previous > 0.0);
    }

    TEST_CASE("conservation holds across seeds and modes") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            auto ds = synth_dataset(seed, 3, 4, 5);
            for (auto mode : {DemandMode::Equality, DemandMode::AtLeast}) {
                ScenarioConfig cfg;
                cfg.demand_mode = mode;
                auto run = run_min_cost(ds, cfg, ds.demand, kHaversine);
                if (!run.optimal()) continue;
                auto res = check_flow(run.built, run.solution, ds, cfg);
                CHECK(res.conservation <= 1e-9);
                CHECK(res.worst_c1_c5() <= 1e-6);
                CHECK(res.demand <= 1e-6);
            }
            auto pot = run_potential(ds, ScenarioConfig{}, kHaversine);
            REQUIRE(pot.optimal());
            CHECK(check_flow(pot.built, pot.solution, ds, ScenarioConfig{}).conservation <= 1e-9);
        }
    }
}

TEST_SUITE("scenarios.siting") {
    TEST_CASE("center of gravity") {
        auto mid = center_of_gravity({{{13, 100}, 2.0}, {{15, 102}, 2.0}});
        CHECK(mid.lat == doctest::Approx(14.0));
        CHECK(mid.lon == doctest::Approx(101.0));
        auto weighted = center_of_gravity({{{13, 100}, 1.0}, {{15, 102}, 3.0}});
        CHECK(weighted.lat == doctest::Approx(14.5));
        CHECK(weighted.lon == doctest::Approx(101.5));
        auto single = center_of_gravity({{{16.25, 103.5}, 0.3}});
        CHECK(single.lat == 16.25);
        CHECK(single.lon == 103.5);
        CHECK_THROWS_AS(center_of_gravity({{{13, 100}, 0.0}, {{15, 102}, 0.0}}), AllZeroWeights);
        CHECK_THROWS_AS(center_of_gravity({}), AllZeroWeights);
    }

    TEST_CASE("sugarcane equivalent of molasses") {
        ScenarioConfig cfg;
        CHECK(sugarcane_equivalent(0.0, cfg) == 0.0);
        CHECK(sugarcane_equivalent(46.0, cfg) == doctest::Approx(1000.0));
        cfg.molasses_per_sugarcane = 1.0;
        CHECK(sugarcane_equivalent(5.0, cfg) == 5.0);
    }

    TEST_CASE("sited plants sit inside the supplier hull") {
        auto ds = synth_dataset(7, 6, 5, 8);
        ScenarioConfig cfg;
        auto pot = evaluate(run_potential(ds, cfg, kHaversine), ds, cfg);
        DemandTargets above = *pot.achieved_demand;
        above.biomass_mw += 3.0;
        auto run = run_expansion(ds, cfg, above, kHaversine);
        REQUIRE(run.optimal());
        REQUIRE(!run.sites.empty());
        double lat_lo = 90, lat_hi = -90, lon_lo = 180, lon_hi = -180;
        for (const auto& s : ds.suppliers) {
            lat_lo = std::min(lat_lo, s.location.lat);
            lat_hi = std::max(lat_hi, s.location.lat);
            lon_lo = std::min(lon_lo, s.location.lon);
            lon_hi = std::max(lon_hi, s.location.lon);
        }
        for (const auto& site : run.sites) {
            CHECK(site.location.lat >= lat_lo);
            CHECK(site.location.lat <= lat_hi);
            CHECK(site.location.lon >= lon_lo);
            CHECK(site.location.lon <= lon_hi);
        }
        CHECK(run.passes.front().name.rfind("siting: ", 0) == 0);
    }
}

TEST_SUITE("scenarios.evaluate") {
    TEST_CASE("capacity factor of a half-loaded plant") {
        Dataset ds = flat_dataset({Biomass::RiceStraw}, 1,
                                  {make_plant("A", PlantKind::BiomassPower, Technology::DirectFiring, 10.0, 1000)}, 1,
                                  1e5);
        ds.timegrid.months[0].hours = 730.0;
        ScenarioConfig cfg;
        cfg.availability_factor = 1.0;
        auto run = run_min_cost(ds, cfg, {5.0, 0.0, 0.0}, kHaversine);
        REQUIRE(run.optimal());
        CHECK(run.solution.primal[run.built.e(0, 0)] == doctest::Approx(3650.0));
        auto rep = evaluate(run, ds, cfg);
        CHECK(rep.of(PlantKind::BiomassPower).capacity_factor == doctest::Approx(0.5));
        CHECK(rep.overall.capacity_factor == doctest::Approx(0.5));
        CHECK(rep.of(PlantKind::BiomassPower).operation_rate == 1.0);
    }

    TEST_CASE("population variance") {
        CHECK(population_variance({0.0, 0.0, 0.0}) == 0.0);
        CHECK(population_variance({1.0, 3.0}) == doctest::Approx(1.0));
        CHECK(population_variance({}) == 0.0);
    }

    TEST_CASE("an idle inventory trajectory has zero variance") {
        auto ds = synth_dataset(3, 3, 4, 5);
        ScenarioConfig cfg;
        auto rep = evaluate(run_min_cost(ds, cfg, {}, kHaversine), ds, cfg);
        for (const auto& k : rep.kinds) CHECK(k.inventory_variance == 0.0);
    }

    TEST_CASE("relative cost increase") {
        CHECK(cost_increase(375.22, 499.99) == doctest::Approx(0.3325).epsilon(0.0005 / 0.3325));
        CHECK(cost_increase(100.0, 100.0) == 0.0);
    }

    TEST_CASE("report tables cover every month") {
        auto ds = synth_dataset(7, 6, 5, 8);
        ScenarioConfig cfg;
        auto rep = evaluate(run_min_cost(ds, cfg, ds.demand, kHaversine), ds, cfg);
        CHECK(rep.biomass_usage.size() == ds.biomass.size() * 12);
        CHECK(rep.production.size() == ds.plants.size() * 12);
        CHECK(rep.inventory.size() == ds.plants.size() * 12);
        // Stock lets a month burn more than it received, never more than the year so far.
        std::map<std::string, std::pair<double, double>> running;
        for (const auto& row : rep.biomass_usage) {
            auto& [used, available] = running[row.biomass];
            used += row.used;
            available += row.available;
            CHECK(used <= available + 1e-6 * (1.0 + available));
        }
    }
}
