#include "bioflow/cli.hpp"

#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "bioflow/config.hpp"
#include "bioflow/csv.hpp"
#include "bioflow/lp/text_format.hpp"
#include "bioflow/report.hpp"
#include "bioflow/scenarios.hpp"

namespace bioflow::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Inputs {
    std::string config;
    std::string suppliers;
    std::string plants;
    std::string distances;
    std::uint64_t seed = 7;
    std::string size = "6,5,8";
    std::string demand_mode;
};

struct RunFlags {
    std::string scenario;
    std::string out = "bioflow-out";
    bool dump_model = false;
    bool targets_from_potential = false;
};

struct Loaded {
    Dataset ds;
    ScenarioConfig cfg;
    DistanceProvider dist;
    bool synthetic = false;
    std::array<std::size_t, 3> size{};
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("bioflow", sink);
    log->set_pattern("[%l] %v");
    const char* level = std::getenv("BIOFLOW_LOG");
    log->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
    return log;
}

std::array<std::size_t, 3> parse_size(const std::string& text) {
    std::array<std::size_t, 3> out{};
    std::size_t n = 0;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto v = csv::parse_int(csv::trim(part));
        if (n >= 3 || !v || *v < 1) throw ConfigError(fmt::format("--size expects SUPPLIERS,BIOMASS,PLANTS, got '{}'", text));
        out[n++] = static_cast<std::size_t>(*v);
    }
    if (n != 3) throw ConfigError(fmt::format("--size expects SUPPLIERS,BIOMASS,PLANTS, got '{}'", text));
    return out;
}

Loaded load_inputs(const Inputs& in, spdlog::logger& log) {
    Loaded l;
    l.cfg = in.config.empty() ? ScenarioConfig{} : load_config(in.config);
    if (!in.demand_mode.empty()) {
        auto m = parse_demand_mode(in.demand_mode);
        if (!m) throw ConfigError(fmt::format("unknown demand mode '{}'", in.demand_mode));
        l.cfg.demand_mode = *m;
    }
    if (in.suppliers.empty() != in.plants.empty()) throw ConfigError("--suppliers and --plants must be given together");
    if (!in.suppliers.empty()) {
        DatasetOptions opt;
        opt.default_holding_cost = l.cfg.default_holding_cost;
        l.ds = load_dataset(in.suppliers, in.plants, opt);
        log.info("loaded {} suppliers, {} biomass types, {} plants", l.ds.suppliers.size(), l.ds.biomass.size(),
                 l.ds.plants.size());
    } else {
        l.synthetic = true;
        l.size = parse_size(in.size);
        l.ds = synth_dataset(in.seed, l.size[0], l.size[1], l.size[2]);
        log.info("synthetic dataset seed {} size {}", in.seed, in.size);
    }
    if (!in.distances.empty())
        l.dist = DistanceProvider::matrix(load_distance_matrix(in.distances, l.ds), false, l.cfg.winding_factor);
    else
        l.dist = DistanceProvider::haversine(l.cfg.winding_factor);
    return l;
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError(fmt::format("cannot write '{}'", tmp.string()));
        f << content;
        f.flush();
        if (!f) throw IoError(fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError(fmt::format("cannot move '{}' into place: {}", path.string(), ec.message()));
}

int exit_code(lp::SolveStatus s) {
    switch (s) {
        case lp::SolveStatus::Optimal: return kExitOk;
        case lp::SolveStatus::Infeasible: return kExitInfeasible;
        case lp::SolveStatus::Unbounded: return kExitUnbounded;
        case lp::SolveStatus::IterationLimit: return kExitIterationLimit;
    }
    return kExitInvalid;
}

Json path_or_null(const std::string& p) { return p.empty() ? Json(nullptr) : Json(p); }

template <class Writer>
std::string render(Writer&& w) {
    std::ostringstream s;
    w(s);
    return s.str();
}

int cmd_run(const Inputs& in, const RunFlags& flags, const std::vector<std::string>& args, std::ostream& out,
            spdlog::logger& log) {
    const auto started = std::chrono::steady_clock::now();
    const auto kind = parse_scenario_kind(flags.scenario);
    if (!kind) throw ConfigError(fmt::format("unknown scenario '{}'", flags.scenario));
    auto l = load_inputs(in, log);
    const auto& ds = l.ds;
    const auto& cfg = l.cfg;
    DemandTargets demands = cfg.demand.value_or(ds.demand);

    ScenarioRun run;
    switch (*kind) {
        case ScenarioKind::Potential: run = run_potential(ds, cfg, l.dist); break;
        case ScenarioKind::MinCost: run = run_min_cost(ds, cfg, demands, l.dist); break;
        case ScenarioKind::FullOperation: run = run_full_operation(ds, cfg, demands, l.dist); break;
        case ScenarioKind::Expansion: {
            std::vector<PassResult> before;
            if (flags.targets_from_potential) {
                auto pot = run_potential(ds, cfg, l.dist);
                for (auto p : pot.passes) {
                    p.name = "targets: " + p.name;
                    before.push_back(std::move(p));
                }
                if (!pot.optimal()) {
                    run = std::move(pot);
                    run.passes = before;
                    break;
                }
                demands = *evaluate(pot, ds, cfg).achieved_demand;
            }
            run = run_expansion(ds, cfg, demands, l.dist);
            run.passes.insert(run.passes.begin(), before.begin(), before.end());
            break;
        }
    }
    for (const auto& p : run.passes)
        log.info("pass {}: {} objective {} after {} iterations", p.name, lp::to_string(p.status), p.objective,
                 p.iterations);

    std::vector<std::pair<std::string, std::string>> files;
    const auto status = run.solution.status;
    if (run.optimal()) {
        auto report = evaluate(run, ds, cfg);
        report.iterations = 0;
        for (const auto& p : run.passes) report.iterations += p.iterations;
        files.emplace_back("report.json", report_json(report, run.passes));
        files.emplace_back("biomass_usage.csv", render([&](std::ostream& s) { write_biomass_usage_csv(s, report); }));
        files.emplace_back("production.csv", render([&](std::ostream& s) { write_production_csv(s, report); }));
        files.emplace_back("inventory.csv", render([&](std::ostream& s) { write_inventory_csv(s, report); }));
        out << fmt::format("{}: Optimal, objective {}, cost {} THB, {} TWh\n", to_string(*kind),
                           csv::number(run.solution.objective), csv::number(report.cost.total()),
                           csv::number(report.total_twh));
    } else {
        files.emplace_back("report.json", status_report_json(*kind, cfg.demand_mode, status, run.passes));
        out << fmt::format("{}: {}\n", to_string(*kind), lp::to_string(status));
    }
    if (flags.dump_model) files.emplace_back("model.lp", lp::write_model_text(run.built.model));

    const fs::path dir(flags.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    for (const auto& [name, content] : files) write_atomic(dir / name, content);

    Json manifest;
    manifest["tool"] = "bioflow";
    manifest["version"] = kToolVersion;
    manifest["command"] = args;
    manifest["scenario"] = to_string(*kind);
    manifest["config"] = path_or_null(in.config);
    if (l.synthetic) {
        manifest["dataset"] = {{"synthetic", true}, {"seed", in.seed}, {"size", l.size}};
    } else {
        manifest["dataset"] = {{"suppliers", in.suppliers}, {"plants", in.plants}, {"distances", path_or_null(in.distances)}};
    }
    manifest["demand_mode"] = to_string(cfg.demand_mode);
    manifest["status"] = lp::to_string(status);
    manifest["solver_iterations"] = run.iterations();
    Json names = Json::array();
    for (const auto& f : files) names.push_back(f.first);
    manifest["outputs"] = names;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    log.info("wrote {} files to {}", files.size() + 1, dir.string());
    return exit_code(status);
}

int cmd_validate(const Inputs& in, std::ostream& out) {
    DatasetOptions opt;
    Dataset ds;
    try {
        ds = load_dataset(in.suppliers, in.plants, opt);
        if (!in.distances.empty()) load_distance_matrix(in.distances, ds);
    } catch (const DatasetError& e) {
        for (const auto& issue : e.issues()) out << issue.describe() << "\n";
        return kExitInvalid;
    }
    out << fmt::format("valid: {} suppliers, {} biomass types, {} plants, {} months\n", ds.suppliers.size(),
                       ds.biomass.size(), ds.plants.size(), ds.timegrid.size());
    return kExitOk;
}

int cmd_tables(const std::string& which, std::ostream& out, std::ostream& err) {
    auto table = parse_reference_table(which);
    if (!table) {
        err << fmt::format("unknown table '{}' (prices, heat, biogas, density, transport)\n", which);
        return kExitInvalid;
    }
    write_reference_table(out, *table);
    return kExitOk;
}

int cmd_synth(const Inputs& in, const std::string& out_dir, std::ostream& out) {
    const auto size = parse_size(in.size);
    auto ds = synth_dataset(in.seed, size[0], size[1], size[2]);
    ScenarioConfig cfg;
    cfg.demand = ds.demand;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    write_atomic(dir / "suppliers.csv", render([&](std::ostream& s) { write_suppliers_csv(s, ds); }));
    write_atomic(dir / "plants.csv", render([&](std::ostream& s) { write_plants_csv(s, ds); }));
    // The CSVs carry no demand, so the synthetic targets travel in a config.
    write_atomic(dir / "scenario.cfg", write_config(cfg));
    out << fmt::format("wrote suppliers.csv, plants.csv and scenario.cfg to {}\n", dir.string());
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);

    CLI::App app{"Biomass-to-energy supply chain planner", "bioflow"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Inputs in;
    RunFlags flags;
    std::string which;
    std::string synth_out = ".";

    auto* validate = app.add_subcommand("validate", "Check supplier and plant files");
    validate->add_option("--suppliers", in.suppliers, "suppliers.csv")->required();
    validate->add_option("--plants", in.plants, "plants.csv")->required();
    validate->add_option("--distances", in.distances, "distances.csv");

    auto* tables = app.add_subcommand("tables", "Print a built-in reference table as CSV");
    tables->add_option("--which", which, "prices, heat, biogas, density or transport")->required();

    auto* run_cmd = app.add_subcommand("run", "Solve a scenario and write its report");
    run_cmd->add_option("scenario", flags.scenario, "potential, mincost, fullop or expand")
        ->required()
        ->check(CLI::IsMember({"potential", "mincost", "fullop", "expand"}));
    run_cmd->add_option("--config", in.config, "key = value settings file");
    run_cmd->add_option("--suppliers", in.suppliers, "suppliers.csv (synthetic data when absent)");
    run_cmd->add_option("--plants", in.plants, "plants.csv");
    run_cmd->add_option("--distances", in.distances, "distances.csv (great-circle km otherwise)");
    run_cmd->add_option("--out", flags.out, "output directory")->capture_default_str();
    run_cmd->add_option("--seed", in.seed, "synthetic dataset seed")->capture_default_str();
    run_cmd->add_option("--size", in.size, "synthetic SUPPLIERS,BIOMASS,PLANTS")->capture_default_str();
    run_cmd->add_flag("--dump-model", flags.dump_model, "also write the LP as model.lp");
    run_cmd->add_option("--demand-mode", in.demand_mode, "equality or at-least");
    run_cmd->add_flag("--targets-from-potential", flags.targets_from_potential,
                      "expand: use the potential scenario's optimum as targets");

    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
    synth->add_option("--seed", in.seed, "seed")->capture_default_str();
    synth->add_option("--size", in.size, "SUPPLIERS,BIOMASS,PLANTS")->capture_default_str();
    synth->add_option("--out", synth_out, "output directory")->capture_default_str();

    std::vector<const char*> argv{"bioflow"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (validate->parsed()) return cmd_validate(in, out);
        if (tables->parsed()) return cmd_tables(which, out, err);
        if (run_cmd->parsed()) return cmd_run(in, flags, args, out, *log);
        if (synth->parsed()) return cmd_synth(in, synth_out, out);
    } catch (const DatasetError& e) {
        for (const auto& issue : e.issues()) err << issue.describe() << "\n";
        return kExitInvalid;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}

}  // namespace bioflow::cli
