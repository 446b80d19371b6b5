// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

#include "bioflow/cli.hpp"
#include "bioflow/conversion.hpp"
#include "bioflow/lp/simplex.hpp"
#include "bioflow/scenarios.hpp"
#include "bioflow/transport.hpp"
#include "support/lp_oracle.hpp"

using namespace bioflow;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

// Published variable transport cost, THB/(km*ton), in built-in table order.
const std::map<std::string, double> kPublishedTransport{
    {"rice straw", 1.01},      {"rice husk", 0.51},       {"sugarcane leaves", 0.95}, {"bagasse", 1.13},
    {"molasses", 0.23},        {"corn leaves and tops", 2.21}, {"corn cob", 0.99},  {"peeled cassava", 0.41},
    {"cassava rhizome", 0.76}, {"cassava fiber", 0.41},   {"cassava peels", 0.73},    {"oil palm bunch", 0.47},
    {"oil palm fiber", 0.72},  {"oil palm shell", 0.45},  {"coconut bunch", 0.51},    {"coconut bract", 1.19},
    {"coconut shell", 0.41},
};

Outcome criterion_table5() {
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t matched = 0;
    const TruckFleet fleet;
    for (const auto& spec : builtin_biomass_table()) {
        const std::string name(biomass_name(spec.id));
        const double shown = std::round(unit_cost(spec, fleet) * 100.0) / 100.0;
        auto it = kPublishedTransport.find(name);
        if (it != kPublishedTransport.end() && std::abs(shown - it->second) < 1e-9)
            ++matched;
        else
            o.require(false, fmt::format("{} gives {:.2f}", name, shown));
    }
    const double dt = seconds_since(t0);
    o.require(matched == 17, fmt::format("{} of 17 match", matched));
    o.require(dt < 1.0, fmt::format("took {:.3f} s", dt));
    if (o.pass) o.detail = fmt::format("17/17 biomass types match, {:.4f} s", dt);
    return o;
}

Outcome criterion_table3() {
    Outcome o;
    std::size_t n = 0;
    double lo = 1e300, hi = -1e300;
    for (const auto& spec : builtin_biomass_table()) {
        auto r = biogas_heat_ratio(spec);
        if (!r) continue;
        ++n;
        lo = std::min(lo, *r);
        hi = std::max(hi, *r);
        o.require(std::abs(*r - 478.05) <= 0.05, fmt::format("{} ratio {:.4f}", biomass_name(spec.id), *r));
    }
    o.require(n == 11, fmt::format("{} ratios instead of 11", n));
    if (o.pass) o.detail = fmt::format("11 ratios within [{:.4f}, {:.4f}]", lo, hi);
    return o;
}

Outcome criterion_energy_identity() {
    Outcome o;
    const double mwh = mwh_equivalent(EnergyCarrier::Electricity, 2550.4 * 8760.0) +
                       mwh_equivalent(EnergyCarrier::Electricity, 35.65 * 8760.0) +
                       mwh_equivalent(EnergyCarrier::Ethanol, 4.79e6 * 365.0);
    const double twh = mwh / 1e6;
    const double rel = std::abs(twh - 33.02) / 33.02;
    o.require(rel <= 1e-3, fmt::format("{:.4f} TWh is {:.3f}% off", twh, 100 * rel));
    if (o.pass) o.detail = fmt::format("{:.4f} TWh, {:.4f}% from 33.02", twh, 100 * rel);
    return o;
}

Outcome criterion_cost_ratio() {
    Outcome o;
    const double inc = cost_increase(375.22, 499.99);
    o.require(std::abs(inc - 0.3325) <= 0.0005, fmt::format("increase {:.4f}%", 100 * inc));
    const double components = 33.94 + 69.9 + 20.87;
    const double total = 499.99 - 375.22;
    o.require(std::abs(components - 124.77) <= 0.1, fmt::format("components sum to {:.2f}", components));
    o.require(std::abs(total - 124.77) <= 0.1, fmt::format("totals differ by {:.2f}", total));
    if (o.pass)
        o.detail = fmt::format("increase {:.4f}%, components {:.2f} vs 124.77 bn THB", 100 * inc, components);
    return o;
}

Outcome criterion_solver_oracle() {
    Outcome o;
    constexpr std::uint64_t kModels = 120;
    double solver_time = 0.0, worst = 0.0;
    std::size_t certified = 0;
    const auto t0 = Clock::now();
    for (std::uint64_t seed = 0; seed < kModels; ++seed) {
        auto m = oracle::random_feasible_model(500 + seed, 8, 8);
        auto expected = oracle::vertex_enumeration(m);
        if (!expected) {
            o.require(false, fmt::format("seed {} has no feasible vertex", 500 + seed));
            continue;
        }
        const auto s0 = Clock::now();
        auto sol = lp::solve(m);
        solver_time += seconds_since(s0);
        if (!sol.optimal()) {
            o.require(false, fmt::format("seed {} is {}", 500 + seed, lp::to_string(sol.status)));
            continue;
        }
        const double rel = std::abs(sol.objective - *expected) / std::max(1.0, std::abs(*expected));
        worst = std::max(worst, rel);
        o.require(rel <= 1e-6, fmt::format("seed {} off by {:.2e}", 500 + seed, rel));
        if (lp::check_certificate(m, sol).accepted())
            ++certified;
        else
            o.require(false, fmt::format("seed {} certificate rejected", 500 + seed));
    }
    const double total = seconds_since(t0);
    o.require(total < 30.0, fmt::format("took {:.2f} s", total));
    if (o.pass)
        o.detail = fmt::format("{} models, worst rel. error {:.1e}, {} certificates, {:.2f} s ({:.3f} s in simplex)",
                               kModels, worst, certified, total, solver_time);
    return o;
}

struct DeskRuns {
    Dataset ds = synth_dataset(7, 6, 5, 8);
    ScenarioConfig cfg;
    DistanceProvider dist = DistanceProvider::haversine();
    std::vector<std::pair<std::string, ScenarioRun>> solved;
};

Outcome criterion_desk(DeskRuns& d) {
    Outcome o;
    const auto t0 = Clock::now();
    auto mc = run_min_cost(d.ds, d.cfg, d.ds.demand, d.dist);
    auto fo = run_full_operation(d.ds, d.cfg, d.ds.demand, d.dist);
    auto pot = run_potential(d.ds, d.cfg, d.dist);
    o.require(mc.optimal() && fo.optimal() && pot.optimal(), "a desk scenario is not optimal");
    if (!o.pass) return o;

    auto mc_rep = evaluate(mc, d.ds, d.cfg);
    auto fo_rep = evaluate(fo, d.ds, d.cfg);
    auto pot_rep = evaluate(pot, d.ds, d.cfg);

    // (a)
    const double c15 = check_flow(mc.built, mc.solution, d.ds, d.cfg).worst_c1_c5();
    o.require(c15 <= 1e-6, fmt::format("(a) C1-C5 residual {:.2e}", c15));
    // (b)
    o.require(fo_rep.overall.operation_rate == 1.0, fmt::format("(b) operation {}", fo_rep.overall.operation_rate));
    o.require(fo_rep.overall.peak_inventory <= mc_rep.overall.peak_inventory + 1e-6,
              fmt::format("(b) peak {} above {}", fo_rep.overall.peak_inventory, mc_rep.overall.peak_inventory));
    o.require(fo_rep.cost.total() >= mc_rep.cost.total() * (1.0 - 1e-9),
              fmt::format("(b) cost {} below {}", fo_rep.cost.total(), mc_rep.cost.total()));
    // (c)
    const auto& achieved = *pot_rep.achieved_demand;
    for (auto k : kPlantKinds)
        o.require(achieved.of(k) <= d.ds.demand.of(k) * (1.0 + 1e-9) && achieved.of(k) >= -1e-9,
                  fmt::format("(c) {} demand {} outside [0, {}]", plant_kind_name(k), achieved.of(k),
                              d.ds.demand.of(k)));
    // (d)
    DemandTargets above = achieved;
    above.biomass_mw = achieved.biomass_mw * 1.5 + 1.0;
    above.biogas_mw = achieved.biogas_mw * 1.5 + 0.5;
    auto ex_at = run_expansion(d.ds, d.cfg, achieved, d.dist);
    auto ex_up = run_expansion(d.ds, d.cfg, above, d.dist);
    o.require(ex_at.optimal() && ex_up.optimal(), "(d) an expansion run is not optimal");
    double s_at = -1.0, s_up = -1.0;
    if (ex_at.optimal() && ex_up.optimal()) {
        s_at = evaluate(ex_at, d.ds, d.cfg).additional_supply_total;
        s_up = evaluate(ex_up, d.ds, d.cfg).additional_supply_total;
        o.require(s_at <= 1e-6, fmt::format("(d) {} t needed at the potential", s_at));
        o.require(s_up > 0.0, "(d) no additional supply above the potential");
    }
    const double dt = seconds_since(t0);
    o.require(dt < 60.0, fmt::format("took {:.1f} s", dt));
    if (o.pass)
        o.detail = fmt::format(
            "C1-C5 {:.1e}; full-op operation {:.0f}%, peak {:.1f} <= {:.1f} t, cost +{:.2f}%; potential within caps; "
            "extra supply {:.1e} t at potential, {:.0f} t above; {:.2f} s",
            c15, 100 * fo_rep.overall.operation_rate, fo_rep.overall.peak_inventory, mc_rep.overall.peak_inventory,
            100 * cost_increase(mc_rep.cost.total(), fo_rep.cost.total()), s_at, s_up, dt);

    d.solved.emplace_back("min-cost", std::move(mc));
    d.solved.emplace_back("full-operation", std::move(fo));
    d.solved.emplace_back("potential", std::move(pot));
    d.solved.emplace_back("expansion at potential", std::move(ex_at));
    d.solved.emplace_back("expansion above potential", std::move(ex_up));
    return o;
}

Outcome criterion_conservation(DeskRuns& d) {
    Outcome o;
    // More instances: at-least demand on the desk data and other seeds.
    {
        ScenarioConfig at_least = d.cfg;
        at_least.demand_mode = DemandMode::AtLeast;
        auto run = run_min_cost(d.ds, at_least, d.ds.demand, d.dist);
        if (run.optimal()) d.solved.emplace_back("min-cost at-least", std::move(run));
    }
    std::size_t count = 0;
    for (std::uint64_t seed : {1, 2, 3, 4}) {
        auto ds = synth_dataset(seed, 4, 5, 6);
        auto run = run_min_cost(ds, d.cfg, ds.demand, d.dist);
        auto pot = run_potential(ds, d.cfg, d.dist);
        for (auto* r : {&run, &pot}) {
            if (!r->optimal()) continue;
            auto res = check_flow(r->built, r->solution, ds, d.cfg);
            o.require(res.conservation <= 1e-9,
                      fmt::format("seed {} conservation {:.2e}", seed, res.conservation));
            o.require(res.demand <= 1e-6, fmt::format("seed {} demand residual {:.2e}", seed, res.demand));
            ++count;
        }
    }

    double worst_cons = 0.0, worst_dem = 0.0;
    for (const auto& [name, run] : d.solved) {
        // The demand sense is read from the built model.
        auto res = check_flow(run.built, run.solution, d.ds, d.cfg);
        worst_cons = std::max(worst_cons, res.conservation);
        worst_dem = std::max(worst_dem, res.demand);
        o.require(res.conservation <= 1e-9, fmt::format("{} conservation {:.2e}", name, res.conservation));
        o.require(res.demand <= 1e-6, fmt::format("{} demand residual {:.2e}", name, res.demand));
        ++count;
    }
    o.require(count >= 10, fmt::format("only {} solved instances", count));
    if (o.pass)
        o.detail = fmt::format("{} solved instances, worst balance {:.1e} of scale, worst demand residual {:.1e}",
                               count, worst_cons, worst_dem);
    return o;
}

std::map<std::string, std::string> read_outputs(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream f(e.path(), std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        files[e.path().filename().string()] = s.str();
    }
    return files;
}

Outcome criterion_determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / fmt::format("bioflow-acceptance-{}", ::getpid());
    std::size_t compared = 0;
    for (const char* scenario : {"potential", "mincost", "fullop", "expand"}) {
        const fs::path dir = root / scenario;
        const std::vector<std::string> args{"run", scenario, "--out", dir.string(), "--dump-model"};
        std::ostringstream out1, out2, err;
        const int c1 = cli::run(args, out1, err);
        auto first = read_outputs(dir);
        const int c2 = cli::run(args, out2, err);
        auto second = read_outputs(dir);
        o.require(c1 == 0 && c2 == 0, fmt::format("{} exited {} and {}", scenario, c1, c2));
        o.require(out1.str() == out2.str(), fmt::format("{} stdout differs", scenario));
        o.require(first.size() == second.size(), fmt::format("{} file sets differ", scenario));
        for (const auto& [name, bytes] : first) {
            if (name == "manifest.json") {
                // Wall time is the one field allowed to change.
                auto a = nlohmann::json::parse(bytes), b = nlohmann::json::parse(second[name]);
                a.erase("wall_time_s");
                b.erase("wall_time_s");
                o.require(a == b, fmt::format("{} manifest differs", scenario));
            } else {
                o.require(second[name] == bytes, fmt::format("{}/{} differs", scenario, name));
            }
            ++compared;
        }
    }
    fs::remove_all(root);
    if (o.pass)
        o.detail = fmt::format("4 scenarios run twice, {} files identical (manifest wall time excluded)", compared);
    return o;
}

}  // namespace

int main() {
    DeskRuns desk;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 transport cost table", criterion_table5},
        {"2 biogas heat ratios", criterion_table3},
        {"3 energy identity", criterion_energy_identity},
        {"4 cost-ratio identity", criterion_cost_ratio},
        {"5 solver oracle", criterion_solver_oracle},
        {"6 desk scenario suite", [&] { return criterion_desk(desk); }},
        {"7 conservation", [&] { return criterion_conservation(desk); }},
        {"8 determinism", criterion_determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = fmt::format("exception: {}", e.what());
        }
        std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
