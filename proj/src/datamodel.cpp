#include "bioflow/datamodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "bioflow/conversion.hpp"
#include "bioflow/csv.hpp"

namespace bioflow {

// ---------------------------------------------------------------------------
// errors

const char* to_string(IssueKind kind) {
    switch (kind) {
        case IssueKind::MissingColumn: return "MissingColumn";
        case IssueKind::BadUnit: return "BadUnit";
        case IssueKind::UnknownBiomass: return "UnknownBiomass";
        case IssueKind::EligibilityViolation: return "EligibilityViolation";
        case IssueKind::UnknownReference: return "UnknownReference";
        case IssueKind::Inconsistent: return "Inconsistent";
    }
    return "?";
}

std::string Issue::describe() const {
    std::string where = file;
    if (row > 0) where += fmt::format(":{}", row);
    if (!field.empty()) where += fmt::format(" [{}]", field);
    return fmt::format("{}: {}: {}", where, to_string(kind), message);
}

namespace {

std::string summarize(const std::vector<Issue>& issues) {
    if (issues.empty()) return "invalid dataset";
    std::string s = issues.front().describe();
    if (issues.size() > 1) s += fmt::format(" (and {} more)", issues.size() - 1);
    return s;
}

}  // namespace

DatasetError::DatasetError(std::vector<Issue> issues) : Error(summarize(issues)), issues_(std::move(issues)) {}

// ---------------------------------------------------------------------------
// names

namespace {

constexpr std::array<std::string_view, kBiomassCount> kBiomassNames{
    "rice straw",       "rice husk",   "sugarcane leaves", "bagasse",         "molasses",
    "corn leaves and tops", "corn cob", "peeled cassava",  "cassava rhizome", "cassava fiber",
    "cassava peels",    "oil palm bunch", "oil palm fiber", "oil palm shell", "coconut bunch",
    "coconut bract",    "coconut shell",
};

std::string normalize_name(std::string_view text) {
    std::string out;
    for (char c : csv::trim(text)) {
        if (c == '_' || c == '-') c = ' ';
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

std::string_view biomass_name(Biomass b) { return kBiomassNames[static_cast<std::size_t>(b)]; }

std::optional<Biomass> parse_biomass(std::string_view text) {
    auto n = normalize_name(text);
    for (std::size_t i = 0; i < kBiomassCount; ++i) {
        if (kBiomassNames[i] == n) return static_cast<Biomass>(i);
    }
    return std::nullopt;
}

std::optional<Technology> technology_from_index(int q) {
    if (q < 1 || q > 5) return std::nullopt;
    return static_cast<Technology>(q);
}

std::string_view technology_name(Technology q) {
    switch (q) {
        case Technology::DirectFiring: return "direct-firing";
        case Technology::Gasification: return "gasification";
        case Technology::CoGeneration: return "co-generation";
        case Technology::AnaerobicDigestion: return "anaerobic digestion";
        case Technology::Fermentation: return "fermentation";
    }
    return "?";
}

std::string TechSet::to_string() const {
    std::string s;
    for (int q = 1; q <= 5; ++q) {
        if (!contains(q)) continue;
        if (!s.empty()) s.push_back('|');
        s += std::to_string(q);
    }
    return s;
}

std::optional<TechSet> TechSet::parse(std::string_view text) {
    TechSet set;
    text = csv::trim(text);
    if (text.empty()) return set;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto bar = text.find('|', pos);
        auto tok = text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
        auto q = csv::parse_int(tok);
        if (!q || !technology_from_index(static_cast<int>(*q))) return std::nullopt;
        set.insert(static_cast<Technology>(*q));
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    return set;
}

std::string_view plant_kind_name(PlantKind k) {
    switch (k) {
        case PlantKind::BiomassPower: return "biomass-power";
        case PlantKind::BiogasPower: return "biogas-power";
        case PlantKind::Ethanol: return "ethanol";
    }
    return "?";
}

std::optional<PlantKind> parse_plant_kind(std::string_view text) {
    auto n = normalize_name(text);
    if (n == "biomass power" || n == "biomass") return PlantKind::BiomassPower;
    if (n == "biogas power" || n == "biogas") return PlantKind::BiogasPower;
    if (n == "ethanol" || n == "bioethanol" || n == "bio ethanol") return PlantKind::Ethanol;
    return std::nullopt;
}

bool kind_allows(PlantKind k, Technology q) {
    switch (k) {
        case PlantKind::BiomassPower:
            return q == Technology::DirectFiring || q == Technology::Gasification || q == Technology::CoGeneration;
        case PlantKind::BiogasPower: return q == Technology::AnaerobicDigestion;
        case PlantKind::Ethanol: return q == Technology::Fermentation;
    }
    return false;
}

double DemandTargets::of(PlantKind k) const {
    switch (k) {
        case PlantKind::BiomassPower: return biomass_mw;
        case PlantKind::BiogasPower: return biogas_mw;
        case PlantKind::Ethanol: return ethanol_ml_per_day;
    }
    return 0.0;
}

DemandTargets aedp_targets() { return {3940.0, 387.0, 4.79}; }

// ---------------------------------------------------------------------------
// built-in biomass table

namespace {

BiomassSpec thermal(Biomass id, double price, double heat, std::optional<double> methane, std::optional<double> g,
                    double density) {
    BiomassSpec s;
    s.id = id;
    s.price = price;
    s.heat_capacity = heat;
    s.methane_content = methane;
    s.biogas_heat_equiv = g;
    s.density = density;
    s.eligible_techs = g ? TechSet{1, 2, 3, 4} : TechSet{1, 2, 3};
    return s;
}

BiomassSpec fermentable(Biomass id, double price, double methane, double density, double kg_per_liter) {
    BiomassSpec s;
    s.id = id;
    s.price = price;
    s.methane_content = methane;
    s.density = density;
    s.ethanol_coeff = kg_per_liter;
    s.eligible_techs = TechSet{5};
    return s;
}

std::vector<BiomassSpec> make_builtin() {
    using B = Biomass;
    return {
        thermal(B::RiceStraw, 2000, 12330, 0.226, 108.0402, 178.255),
        thermal(B::RiceHusk, 1500, 13520, 0.019, 9.0830, 356.065),
        thermal(B::SugarcaneLeaves, 800, 15480, 0.148, 70.7520, 190.43),
        thermal(B::Bagasse, 500, 7370, 0.185, 88.4400, 160),
        fermentable(B::Molasses, 10410, 0.324, 1441, 3.8),
        thermal(B::CornLeavesAndTops, 1500, 9830, 0.199, 95.1327, 81.61),
        thermal(B::CornCob, 500, 9620, 0.1, 47.8054, 182.38),
        fermentable(B::PeeledCassava, 2700, 0.262, 637.38, 5.975),
        thermal(B::CassavaRhizome, 1800, 5490, 0.09676, 46.2565, 238),
        thermal(B::CassavaFiber, 3300, 1470, 0.167, 79.8350, 712.50),
        thermal(B::CassavaPeels, 2800, 1490, 0.078, 37.2882, 247.87),
        thermal(B::OilPalmBunch, 50, 7240, 0.1996, 95.4196, 380),
        thermal(B::OilPalmFiber, 1500, 11400, 0.1664, 79.5482, 250),
        thermal(B::OilPalmShell, 3200, 16900, std::nullopt, std::nullopt, 400),
        thermal(B::CoconutBunch, 1000, 15400, std::nullopt, std::nullopt, 355),
        thermal(B::CoconutBract, 5000, 16230, std::nullopt, std::nullopt, 151.91),
        thermal(B::CoconutShell, 1000, 17930, std::nullopt, std::nullopt, 920.53),
    };
}

bool never_digested(Biomass b) {
    return b == Biomass::OilPalmShell || b == Biomass::CoconutBunch || b == Biomass::CoconutBract ||
           b == Biomass::CoconutShell;
}

bool fermentation_only(Biomass b) { return b == Biomass::Molasses || b == Biomass::PeeledCassava; }

}  // namespace

const std::vector<BiomassSpec>& builtin_biomass_table() {
    static const std::vector<BiomassSpec> table = make_builtin();
    return table;
}

const BiomassSpec& builtin_biomass(Biomass b) { return builtin_biomass_table()[static_cast<std::size_t>(b)]; }

std::vector<std::string> check_biomass_spec(const BiomassSpec& s) {
    std::vector<std::string> out;
    auto name = biomass_name(s.id);
    if (!(s.price >= 0.0) || !std::isfinite(s.price)) out.push_back(fmt::format("{}: price must be >= 0", name));
    if (!(s.density > 0.0) || !std::isfinite(s.density)) out.push_back(fmt::format("{}: density must be > 0", name));

    const bool thermal_any = s.eligible(Technology::DirectFiring) || s.eligible(Technology::Gasification) ||
                             s.eligible(Technology::CoGeneration);
    const bool thermal_all = s.eligible(Technology::DirectFiring) && s.eligible(Technology::Gasification) &&
                             s.eligible(Technology::CoGeneration);
    if (s.heat_capacity.has_value() != thermal_all || thermal_any != thermal_all)
        out.push_back(fmt::format("{}: heat capacity present iff eligible for q=1,2,3", name));
    if (s.heat_capacity && !(*s.heat_capacity >= 0.0))
        out.push_back(fmt::format("{}: heat capacity must be >= 0", name));

    if (fermentation_only(s.id)) {
        if (!(s.eligible_techs == TechSet{5})) out.push_back(fmt::format("{}: only fermentation (q=5) allowed", name));
        if (s.heat_capacity) out.push_back(fmt::format("{}: heat capacity must be absent", name));
    }
    if (never_digested(s.id) && s.eligible(Technology::AnaerobicDigestion))
        out.push_back(fmt::format("{}: not usable for biogas (q=4)", name));

    const bool g_expected = s.methane_content.has_value() && s.eligible(Technology::AnaerobicDigestion);
    if (s.biogas_heat_equiv.has_value() != g_expected)
        out.push_back(fmt::format("{}: biogas heat equivalent present iff methane content present and q=4 eligible",
                                  name));
    if (s.eligible(Technology::Fermentation) != s.ethanol_coeff.has_value())
        out.push_back(fmt::format("{}: ethanol coefficient present iff q=5 eligible", name));
    if (s.ethanol_coeff && !(*s.ethanol_coeff > 0.0))
        out.push_back(fmt::format("{}: ethanol coefficient must be > 0", name));
    return out;
}

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? csv::number(*v) : std::string{}; }

const std::vector<std::string> kBiomassTableHeader{"biomass",         "price_thb_ton",   "heat_mj_ton",
                                                   "methane_m3_kg",   "biogas_mj_ton",   "density_kg_m3",
                                                   "ethanol_kg_l",    "eligible_techs"};

}  // namespace

void write_biomass_table(std::ostream& out, const std::vector<BiomassSpec>& table) {
    csv::write_row(out, kBiomassTableHeader);
    for (const auto& s : table) {
        csv::write_row(out, {std::string(biomass_name(s.id)), csv::number(s.price), opt_cell(s.heat_capacity),
                             opt_cell(s.methane_content), opt_cell(s.biogas_heat_equiv), csv::number(s.density),
                             opt_cell(s.ethanol_coeff), s.eligible_techs.to_string()});
    }
}

std::vector<BiomassSpec> parse_biomass_table(std::istream& in, const std::string& source) {
    auto table = csv::read(in);
    std::vector<Issue> issues;
    std::vector<std::size_t> cols;
    for (const auto& h : kBiomassTableHeader) {
        auto c = table.column(h);
        if (!c) issues.push_back({IssueKind::MissingColumn, source, 0, h, "column missing"});
        cols.push_back(c.value_or(0));
    }
    if (!issues.empty()) throw DatasetError(std::move(issues));

    std::vector<BiomassSpec> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto cell = [&](std::size_t k) -> std::string_view {
            return cols[k] < row.size() ? std::string_view(row[cols[k]]) : std::string_view{};
        };
        auto num = [&](std::size_t k, bool optional) -> std::optional<double> {
            auto text = cell(k);
            if (text.empty() && optional) return std::nullopt;
            auto v = csv::parse_double(text);
            if (!v) issues.push_back({IssueKind::BadUnit, source, r + 1, kBiomassTableHeader[k], "not a number"});
            return v;
        };
        BiomassSpec s;
        auto id = parse_biomass(cell(0));
        if (!id) {
            issues.push_back({IssueKind::UnknownBiomass, source, r + 1, "biomass", std::string(cell(0))});
            continue;
        }
        s.id = *id;
        s.price = num(1, false).value_or(0.0);
        s.heat_capacity = num(2, true);
        s.methane_content = num(3, true);
        s.biogas_heat_equiv = num(4, true);
        s.density = num(5, false).value_or(0.0);
        s.ethanol_coeff = num(6, true);
        auto techs = TechSet::parse(cell(7));
        if (!techs) {
            issues.push_back({IssueKind::BadUnit, source, r + 1, "eligible_techs", std::string(cell(7))});
        } else {
            s.eligible_techs = *techs;
        }
        for (auto& msg : check_biomass_spec(s))
            issues.push_back({IssueKind::EligibilityViolation, source, r + 1, "biomass", msg});
        out.push_back(s);
    }
    if (!issues.empty()) throw DatasetError(std::move(issues));
    return out;
}

// ---------------------------------------------------------------------------
// time grid

double TimeGrid::total_hours() const {
    double h = 0.0;
    for (const auto& m : months) h += m.hours;
    return h;
}

int TimeGrid::total_days() const {
    int d = 0;
    for (const auto& m : months) d += m.days;
    return d;
}

TimeGrid TimeGrid::civil_year() { return first_months(12); }

TimeGrid TimeGrid::first_months(std::size_t n) {
    static constexpr std::array<std::string_view, 12> names{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                            "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (n < 1 || n > 12) throw SizeOutOfRange(fmt::format("time grid must have 1..12 months, got {}", n));
    TimeGrid g;
    for (std::size_t i = 0; i < n; ++i) g.months.push_back({std::string(names[i]), days[i], 24.0 * days[i]});
    return g;
}

std::optional<std::size_t> Dataset::biomass_index(Biomass b) const {
    for (std::size_t i = 0; i < biomass.size(); ++i) {
        if (biomass[i].id == b) return i;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// validation

namespace {

bool valid_lat(double v) { return std::isfinite(v) && v >= -90.0 && v <= 90.0; }
bool valid_lon(double v) { return std::isfinite(v) && v >= -180.0 && v <= 180.0; }

}  // namespace

std::vector<Issue> validate_dataset(const Dataset& ds) {
    std::vector<Issue> issues;
    const std::string where = "<dataset>";
    auto add = [&](IssueKind k, std::string field, std::string msg) {
        issues.push_back({k, where, 0, std::move(field), std::move(msg)});
    };

    std::set<Biomass> seen_biomass;
    for (const auto& s : ds.biomass) {
        if (!seen_biomass.insert(s.id).second)
            add(IssueKind::Inconsistent, "biomass", fmt::format("duplicate biomass {}", biomass_name(s.id)));
        for (auto& msg : check_biomass_spec(s)) add(IssueKind::EligibilityViolation, "biomass", msg);
    }

    if (ds.timegrid.size() == 0) add(IssueKind::Inconsistent, "timegrid", "time grid has no months");
    for (const auto& m : ds.timegrid.months) {
        if (m.days <= 0 || m.hours != 24.0 * m.days)
            add(IssueKind::Inconsistent, "timegrid", fmt::format("month {} must have 24 h per day", m.name));
    }
    if (ds.timegrid.size() == 12 && (ds.timegrid.total_hours() != 8760.0 || ds.timegrid.total_days() != 365))
        add(IssueKind::Inconsistent, "timegrid", "a 12-month grid must total 8760 h / 365 days");

    std::set<int> province_ids;
    for (const auto& s : ds.suppliers) {
        auto id = fmt::format("supplier {}", s.province_id);
        if (s.province_id < 1) add(IssueKind::Inconsistent, "province_id", id + ": id must be >= 1");
        if (!province_ids.insert(s.province_id).second)
            add(IssueKind::Inconsistent, "province_id", id + ": duplicate id");
        if (!valid_lat(s.location.lat)) add(IssueKind::BadUnit, "lat", id + ": latitude out of range");
        if (!valid_lon(s.location.lon)) add(IssueKind::BadUnit, "lon", id + ": longitude out of range");
        if (s.availability.size() != ds.biomass.size()) {
            add(IssueKind::Inconsistent, "available_tons", id + ": availability rows do not match biomass list");
            continue;
        }
        for (std::size_t b = 0; b < s.availability.size(); ++b) {
            if (s.availability[b].size() != ds.timegrid.size()) {
                add(IssueKind::Inconsistent, "available_tons", id + ": availability months do not match time grid");
                continue;
            }
            for (std::size_t t = 0; t < s.availability[b].size(); ++t) {
                double a = s.availability[b][t];
                if (!(a >= 0.0) || !std::isfinite(a))
                    add(IssueKind::BadUnit, "available_tons",
                        fmt::format("{}: availability of {} in month {} is {}", id,
                                    biomass_name(ds.biomass[b].id), t + 1, a));
            }
        }
    }

    std::set<std::string> plant_ids;
    std::array<bool, 3> have_kind{};
    for (const auto& p : ds.plants) {
        auto id = fmt::format("plant {}", p.plant_id);
        if (p.plant_id.empty()) add(IssueKind::Inconsistent, "plant_id", "empty plant id");
        if (!plant_ids.insert(p.plant_id).second) add(IssueKind::Inconsistent, "plant_id", id + ": duplicate id");
        if (!kind_allows(p.kind, p.technology))
            add(IssueKind::EligibilityViolation, "technology",
                fmt::format("{}: kind {} cannot use q={}", id, plant_kind_name(p.kind), tech_index(p.technology)));
        if (!(p.capacity > 0.0) || !std::isfinite(p.capacity))
            add(IssueKind::BadUnit, "capacity", id + ": capacity must be > 0");
        if (!(p.max_inventory >= 0.0) || !std::isfinite(p.max_inventory))
            add(IssueKind::BadUnit, "max_inventory_tons", id + ": inventory cap must be >= 0");
        if (!(p.holding_cost >= 0.0) || !std::isfinite(p.holding_cost))
            add(IssueKind::BadUnit, "holding_cost_thb_ton_month", id + ": holding cost must be >= 0");
        if (!valid_lat(p.location.lat)) add(IssueKind::BadUnit, "lat", id + ": latitude out of range");
        if (!valid_lon(p.location.lon)) add(IssueKind::BadUnit, "lon", id + ": longitude out of range");
        if (p.efficiency_override && !(*p.efficiency_override > 0.0 && *p.efficiency_override <= 1.0))
            add(IssueKind::BadUnit, "efficiency", id + ": efficiency must lie in (0, 1]");
        have_kind[static_cast<std::size_t>(p.kind)] = true;
    }

    for (PlantKind k : kPlantKinds) {
        double d = ds.demand.of(k);
        if (!(d >= 0.0) || !std::isfinite(d))
            add(IssueKind::BadUnit, "demand", fmt::format("demand for {} must be >= 0", plant_kind_name(k)));
        else if (d > 0.0 && !have_kind[static_cast<std::size_t>(k)])
            add(IssueKind::UnknownReference, "demand",
                fmt::format("positive demand for {} but no such plant", plant_kind_name(k)));
    }
    return issues;
}

// ---------------------------------------------------------------------------
// CSV loading

namespace {

const std::vector<std::string> kSupplierColumns{"province_id", "name", "lat", "lon", "biomass", "month",
                                                "available_tons"};
const std::vector<std::string> kPlantColumns{"plant_id",
                                             "kind",
                                             "technology",
                                             "capacity",
                                             "capacity_unit",
                                             "max_inventory_tons",
                                             "holding_cost_thb_ton_month",
                                             "lat",
                                             "lon"};

struct ColumnMap {
    std::map<std::string, std::size_t> index;

    std::string_view get(const std::vector<std::string>& row, const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end() || it->second >= row.size()) return {};
        return row[it->second];
    }
};

ColumnMap map_columns(const csv::Table& table, const std::vector<std::string>& required, const std::string& file,
                      std::vector<Issue>& issues) {
    ColumnMap m;
    for (std::size_t i = 0; i < table.header.size(); ++i) m.index.emplace(table.header[i], i);
    for (const auto& name : required) {
        if (!m.index.count(name)) issues.push_back({IssueKind::MissingColumn, file, 0, name, "column missing"});
    }
    return m;
}

std::optional<int> parse_month(std::string_view text) {
    if (auto v = csv::parse_int(text)) {
        if (*v >= 1 && *v <= 12) return static_cast<int>(*v);
        return std::nullopt;
    }
    auto n = normalize_name(text);
    static constexpr std::array<std::string_view, 12> names{"jan", "feb", "mar", "apr", "may", "jun",
                                                            "jul", "aug", "sep", "oct", "nov", "dec"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (n.size() >= 3 && n.substr(0, 3) == names[i]) return static_cast<int>(i + 1);
    }
    return std::nullopt;
}

struct SupplierRow {
    int province_id;
    std::string name;
    GeoPoint location;
    std::size_t first_row;
};

}  // namespace

Dataset parse_dataset(std::istream& suppliers, const std::string& supplier_name, std::istream& plants,
                      const std::string& plant_name, const DatasetOptions& options) {
    std::vector<Issue> issues;
    Dataset ds;
    ds.timegrid = TimeGrid::civil_year();
    ds.demand = options.demand;

    // suppliers.csv
    auto stable = csv::read(suppliers);
    auto scols = map_columns(stable, kSupplierColumns, supplier_name, issues);
    std::set<Biomass> allowed(options.biomass_subset.begin(), options.biomass_subset.end());

    struct Cell {
        int province;
        Biomass biomass;
        int month;
        double tons;
    };
    std::vector<Cell> cells;
    std::map<int, SupplierRow> supplier_rows;
    std::set<Biomass> used;
    std::set<std::tuple<int, Biomass, int>> seen_cells;

    if (issues.empty()) {
        for (std::size_t r = 0; r < stable.rows.size(); ++r) {
            const auto& row = stable.rows[r];
            const std::size_t line = r + 1;
            bool ok = true;
            auto fail = [&](IssueKind k, const char* field, std::string msg) {
                issues.push_back({k, supplier_name, line, field, std::move(msg)});
                ok = false;
            };
            auto pid = csv::parse_int(scols.get(row, "province_id"));
            if (!pid || *pid < 1) fail(IssueKind::BadUnit, "province_id", "expected a positive integer");
            auto lat = csv::parse_double(scols.get(row, "lat"));
            if (!lat || !valid_lat(*lat)) fail(IssueKind::BadUnit, "lat", "latitude must be a number in [-90, 90]");
            auto lon = csv::parse_double(scols.get(row, "lon"));
            if (!lon || !valid_lon(*lon))
                fail(IssueKind::BadUnit, "lon", "longitude must be a number in [-180, 180]");
            auto bname = scols.get(row, "biomass");
            auto b = parse_biomass(bname);
            if (!b)
                fail(IssueKind::UnknownBiomass, "biomass", fmt::format("unknown biomass '{}'", bname));
            else if (!allowed.empty() && !allowed.count(*b))
                fail(IssueKind::UnknownBiomass, "biomass",
                     fmt::format("biomass '{}' is not part of this dataset", bname));
            auto month = parse_month(scols.get(row, "month"));
            if (!month) fail(IssueKind::BadUnit, "month", fmt::format("bad month '{}'", scols.get(row, "month")));
            auto tons = csv::parse_double(scols.get(row, "available_tons"));
            if (!tons || *tons < 0.0 || !std::isfinite(*tons))
                fail(IssueKind::BadUnit, "available_tons",
                     fmt::format("availability must be a non-negative number of tons, got '{}'",
                                 scols.get(row, "available_tons")));
            if (!ok) continue;

            int id = static_cast<int>(*pid);
            std::string name(scols.get(row, "name"));
            auto [it, inserted] = supplier_rows.try_emplace(id, SupplierRow{id, name, {*lat, *lon}, line});
            if (!inserted && (it->second.name != name || it->second.location != GeoPoint{*lat, *lon})) {
                fail(IssueKind::Inconsistent, "name",
                     fmt::format("province {} disagrees with row {} on name or location", id, it->second.first_row));
                continue;
            }
            if (!seen_cells.emplace(id, *b, *month).second) {
                fail(IssueKind::Inconsistent, "month",
                     fmt::format("duplicate entry for province {}, {}, month {}", id, bname, *month));
                continue;
            }
            used.insert(*b);
            cells.push_back({id, *b, *month, *tons});
        }
    }

    // plants.csv
    auto ptable = csv::read(plants);
    std::vector<Issue> plant_issues;
    auto pcols = map_columns(ptable, kPlantColumns, plant_name, plant_issues);
    if (plant_issues.empty()) {
        for (std::size_t r = 0; r < ptable.rows.size(); ++r) {
            const auto& row = ptable.rows[r];
            const std::size_t line = r + 1;
            bool ok = true;
            auto fail = [&](IssueKind k, const char* field, std::string msg) {
                plant_issues.push_back({k, plant_name, line, field, std::move(msg)});
                ok = false;
            };
            Plant p;
            p.plant_id = std::string(pcols.get(row, "plant_id"));
            if (p.plant_id.empty()) fail(IssueKind::Inconsistent, "plant_id", "empty plant id");
            auto kind = parse_plant_kind(pcols.get(row, "kind"));
            if (!kind) fail(IssueKind::BadUnit, "kind", fmt::format("unknown plant kind '{}'", pcols.get(row, "kind")));
            auto q = csv::parse_int(pcols.get(row, "technology"));
            std::optional<Technology> tech = q ? technology_from_index(static_cast<int>(*q)) : std::nullopt;
            if (!tech) fail(IssueKind::BadUnit, "technology", "technology must be an integer 1..5");
            if (kind && tech && !kind_allows(*kind, *tech))
                fail(IssueKind::EligibilityViolation, "technology",
                     fmt::format("kind {} cannot use technology q={}", plant_kind_name(*kind), tech_index(*tech)));
            auto cap = csv::parse_double(pcols.get(row, "capacity"));
            if (!cap || !(*cap > 0.0) || !std::isfinite(*cap))
                fail(IssueKind::BadUnit, "capacity", "capacity must be a positive number");
            auto unit = csv::trim(pcols.get(row, "capacity_unit"));
            if (kind) {
                auto expected = is_power(*kind) ? "MW" : "L_per_day";
                if (unit != expected)
                    fail(IssueKind::BadUnit, "capacity_unit",
                         fmt::format("kind {} needs capacity in {}, got '{}'", plant_kind_name(*kind), expected, unit));
            }
            auto inv = csv::parse_double(pcols.get(row, "max_inventory_tons"));
            if (!inv || !(*inv >= 0.0) || !std::isfinite(*inv))
                fail(IssueKind::BadUnit, "max_inventory_tons", "inventory cap must be a non-negative number");
            auto hold_text = csv::trim(pcols.get(row, "holding_cost_thb_ton_month"));
            std::optional<double> hold;
            if (!hold_text.empty()) {
                hold = csv::parse_double(hold_text);
                if (!hold || !(*hold >= 0.0))
                    fail(IssueKind::BadUnit, "holding_cost_thb_ton_month", "holding cost must be >= 0");
            }
            auto lat = csv::parse_double(pcols.get(row, "lat"));
            if (!lat || !valid_lat(*lat)) fail(IssueKind::BadUnit, "lat", "latitude must be a number in [-90, 90]");
            auto lon = csv::parse_double(pcols.get(row, "lon"));
            if (!lon || !valid_lon(*lon))
                fail(IssueKind::BadUnit, "lon", "longitude must be a number in [-180, 180]");
            auto eff_text = csv::trim(pcols.get(row, "efficiency"));
            if (!eff_text.empty()) {
                auto eff = csv::parse_double(eff_text);
                if (!eff || !(*eff > 0.0 && *eff <= 1.0))
                    fail(IssueKind::BadUnit, "efficiency", "efficiency must lie in (0, 1]");
                else
                    p.efficiency_override = eff;
            }
            if (!ok) continue;
            p.kind = *kind;
            p.technology = *tech;
            p.capacity = *cap;
            p.max_inventory = *inv;
            p.holding_cost = hold.value_or(options.default_holding_cost);
            p.holding_cost_defaulted = !hold.has_value();
            p.location = {*lat, *lon};
            ds.plants.push_back(std::move(p));
        }
    }
    issues.insert(issues.end(), plant_issues.begin(), plant_issues.end());
    if (!issues.empty()) throw DatasetError(std::move(issues));

    // assemble
    std::vector<Biomass> order;
    if (!options.biomass_subset.empty()) {
        order = options.biomass_subset;
        std::sort(order.begin(), order.end());
        order.erase(std::unique(order.begin(), order.end()), order.end());
    } else {
        order.assign(used.begin(), used.end());
    }
    for (Biomass b : order) ds.biomass.push_back(builtin_biomass(b));

    std::map<int, std::size_t> supplier_pos;
    for (const auto& [id, sr] : supplier_rows) {
        supplier_pos[id] = ds.suppliers.size();
        SupplierProfile s;
        s.province_id = id;
        s.name = sr.name;
        s.location = sr.location;
        s.availability.assign(ds.biomass.size(), std::vector<double>(ds.timegrid.size(), 0.0));
        ds.suppliers.push_back(std::move(s));
    }
    for (const auto& c : cells) {
        auto bi = *ds.biomass_index(c.biomass);
        ds.suppliers[supplier_pos[c.province]].availability[bi][static_cast<std::size_t>(c.month - 1)] = c.tons;
    }

    auto final_issues = validate_dataset(ds);
    if (!final_issues.empty()) throw DatasetError(std::move(final_issues));
    return ds;
}

Dataset load_dataset(const std::filesystem::path& supplier_file, const std::filesystem::path& plant_file,
                     const DatasetOptions& options) {
    std::ifstream s(supplier_file);
    if (!s) throw IoError(fmt::format("cannot open {}", supplier_file.string()));
    std::ifstream p(plant_file);
    if (!p) throw IoError(fmt::format("cannot open {}", plant_file.string()));
    return parse_dataset(s, supplier_file.filename().string(), p, plant_file.filename().string(), options);
}

void write_suppliers_csv(std::ostream& out, const Dataset& ds) {
    csv::write_row(out, kSupplierColumns);
    for (const auto& s : ds.suppliers) {
        for (std::size_t b = 0; b < ds.biomass.size(); ++b) {
            for (std::size_t t = 0; t < ds.timegrid.size(); ++t) {
                csv::write_row(out, {std::to_string(s.province_id), s.name, csv::number(s.location.lat),
                                     csv::number(s.location.lon), std::string(biomass_name(ds.biomass[b].id)),
                                     std::to_string(t + 1), csv::number(s.availability[b][t])});
            }
        }
    }
}

void write_plants_csv(std::ostream& out, const Dataset& ds) {
    bool any_eff = std::any_of(ds.plants.begin(), ds.plants.end(),
                               [](const Plant& p) { return p.efficiency_override.has_value(); });
    auto header = kPlantColumns;
    if (any_eff) header.push_back("efficiency");
    csv::write_row(out, header);
    for (const auto& p : ds.plants) {
        std::vector<std::string> row{p.plant_id,
                                     std::string(plant_kind_name(p.kind)),
                                     std::to_string(tech_index(p.technology)),
                                     csv::number(p.capacity),
                                     is_power(p.kind) ? "MW" : "L_per_day",
                                     csv::number(p.max_inventory),
                                     p.holding_cost_defaulted ? std::string{} : csv::number(p.holding_cost),
                                     csv::number(p.location.lat),
                                     csv::number(p.location.lon)};
        if (any_eff) row.push_back(p.efficiency_override ? csv::number(*p.efficiency_override) : std::string{});
        csv::write_row(out, row);
    }
}

// ---------------------------------------------------------------------------
// synthetic data

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform on [0, 1) from the top 53 bits; independent of the standard
    /// library's distribution implementations.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

private:
    std::mt19937_64 engine_;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

// Interleaves thermal, fermentable and digestible feedstock so small subsets
// still serve every plant kind.
constexpr std::array<Biomass, kBiomassCount> kSynthOrder{
    Biomass::RiceStraw,     Biomass::Molasses,       Biomass::Bagasse,         Biomass::CassavaFiber,
    Biomass::PeeledCassava, Biomass::RiceHusk,       Biomass::CornCob,         Biomass::SugarcaneLeaves,
    Biomass::OilPalmBunch,  Biomass::CassavaRhizome, Biomass::CornLeavesAndTops, Biomass::CassavaPeels,
    Biomass::OilPalmFiber,  Biomass::OilPalmShell,   Biomass::CoconutBunch,    Biomass::CoconutBract,
    Biomass::CoconutShell,
};

constexpr double kPeakShare = 0.70;
constexpr std::size_t kPeakMonths = 4;
// Demand as a share of nameplate. Stock starts at zero, so until the first
// harvest a plant lives on the off-season rate (1.25 x 30% / 8 per month, about
// 56% of nameplate need); much above that the instance turns infeasible.
constexpr double kDemandShare = 0.60;

}  // namespace

Dataset synth_dataset(std::uint64_t seed, std::size_t n_suppliers, std::size_t n_biomass, std::size_t n_plants) {
    if (n_suppliers < 1 || n_biomass < 1 || n_plants < 1)
        throw SizeOutOfRange("synthetic dataset sizes must be >= 1");
    if (n_biomass > kBiomassCount)
        throw SizeOutOfRange(fmt::format("at most {} biomass types, got {}", kBiomassCount, n_biomass));

    Rng rng(seed);
    Dataset ds;
    ds.timegrid = TimeGrid::civil_year();
    const std::size_t months = ds.timegrid.size();

    std::vector<Biomass> chosen(kSynthOrder.begin(), kSynthOrder.begin() + static_cast<std::ptrdiff_t>(n_biomass));
    std::sort(chosen.begin(), chosen.end());
    for (Biomass b : chosen) ds.biomass.push_back(builtin_biomass(b));

    std::vector<PlantKind> kinds;
    auto any_with = [&](Technology q) {
        return std::any_of(ds.biomass.begin(), ds.biomass.end(), [&](const BiomassSpec& s) { return s.eligible(q); });
    };
    if (any_with(Technology::DirectFiring)) kinds.push_back(PlantKind::BiomassPower);
    if (any_with(Technology::AnaerobicDigestion)) kinds.push_back(PlantKind::BiogasPower);
    if (any_with(Technology::Fermentation)) kinds.push_back(PlantKind::Ethanol);

    const EfficiencySet eff;
    std::vector<double> biomass_need(ds.biomass.size(), 0.0);
    int thermal_count = 0;
    for (std::size_t j = 0; j < n_plants; ++j) {
        Plant p;
        p.plant_id = fmt::format("P{:03}", j + 1);
        p.kind = kinds[j % kinds.size()];
        switch (p.kind) {
            case PlantKind::BiomassPower:
                p.technology = static_cast<Technology>(1 + thermal_count++ % 3);
                p.capacity = round_to(1.0 + 4.0 * rng.uniform(), 0.001);
                break;
            case PlantKind::BiogasPower:
                p.technology = Technology::AnaerobicDigestion;
                p.capacity = round_to(0.05 + 0.15 * rng.uniform(), 0.001);
                break;
            case PlantKind::Ethanol:
                p.technology = Technology::Fermentation;
                p.capacity = round_to(10000.0 + 40000.0 * rng.uniform(), 1.0);
                break;
        }
        p.location = {round_to(6.0 + 14.0 * rng.uniform(), 1e-4), round_to(98.0 + 7.0 * rng.uniform(), 1e-4)};
        p.holding_cost = round_to(30.0 + 40.0 * rng.uniform(), 0.01);

        // Annual feedstock to run at nameplate, split evenly over eligible types.
        const double annual_output = p.capacity * (is_power(p.kind) ? ds.timegrid.total_hours()
                                                                    : static_cast<double>(ds.timegrid.total_days()));
        std::vector<std::size_t> elig;
        double yield_sum = 0.0;
        for (std::size_t b = 0; b < ds.biomass.size(); ++b) {
            if (auto y = yield_per_ton(ds.biomass[b], p.technology, eff)) {
                elig.push_back(b);
                yield_sum += *y;
            }
        }
        const double need = annual_output / (yield_sum / static_cast<double>(elig.size()));
        for (auto b : elig) biomass_need[b] += need / static_cast<double>(elig.size());
        p.max_inventory = round_to(0.35 * need, 1.0);
        ds.plants.push_back(std::move(p));
    }

    std::vector<std::size_t> season_start(ds.biomass.size());
    for (auto& s : season_start) s = rng.below(months);

    std::vector<std::vector<double>> weight(n_suppliers, std::vector<double>(ds.biomass.size()));
    std::vector<double> weight_sum(ds.biomass.size(), 0.0);
    for (std::size_t i = 0; i < n_suppliers; ++i) {
        SupplierProfile s;
        s.province_id = static_cast<int>(i + 1);
        s.name = fmt::format("province-{:02}", i + 1);
        s.location = {round_to(6.0 + 14.0 * rng.uniform(), 1e-4), round_to(98.0 + 7.0 * rng.uniform(), 1e-4)};
        for (std::size_t b = 0; b < ds.biomass.size(); ++b) {
            weight[i][b] = 0.5 + rng.uniform();
            weight_sum[b] += weight[i][b];
        }
        ds.suppliers.push_back(std::move(s));
    }

    for (std::size_t i = 0; i < n_suppliers; ++i) {
        auto& s = ds.suppliers[i];
        s.availability.assign(ds.biomass.size(), std::vector<double>(months, 0.0));
        for (std::size_t b = 0; b < ds.biomass.size(); ++b) {
            const double annual_total = biomass_need[b] > 0.0 ? 1.25 * biomass_need[b] : 1000.0;
            const double annual = annual_total * weight[i][b] / weight_sum[b];
            for (std::size_t t = 0; t < months; ++t) {
                const std::size_t offset = (t + months - season_start[b]) % months;
                const double share = offset < kPeakMonths
                                         ? kPeakShare / kPeakMonths
                                         : (1.0 - kPeakShare) / static_cast<double>(months - kPeakMonths);
                s.availability[b][t] = round_to(annual * share, 0.01);
            }
        }
    }

    double mw_biomass = 0.0, mw_biogas = 0.0, l_ethanol = 0.0;
    for (const auto& p : ds.plants) {
        if (p.kind == PlantKind::BiomassPower) mw_biomass += p.capacity;
        if (p.kind == PlantKind::BiogasPower) mw_biogas += p.capacity;
        if (p.kind == PlantKind::Ethanol) l_ethanol += p.capacity;
    }
    ds.demand = {round_to(kDemandShare * mw_biomass, 1e-6), round_to(kDemandShare * mw_biogas, 1e-6),
                 round_to(kDemandShare * l_ethanol / 1e6, 1e-9)};
    return ds;
}

}  // namespace bioflow
