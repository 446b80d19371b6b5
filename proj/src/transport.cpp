#include "bioflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "bioflow/csv.hpp"

namespace bioflow {

TruckSpec TruckSpec::flatbed10w() { return {"flatbed10w", 16.0, 36.4, kTruckCostPerKm}; }

TruckSpec TruckSpec::tanker() { return {"tanker", 28.5, std::nullopt, kTruckCostPerKm}; }

double truck_load(const BiomassSpec& biomass, const TruckSpec& truck) {
    if (!truck.cargo_volume) return truck.payload;
    return std::min(truck.payload, biomass.density * *truck.cargo_volume / 1000.0);
}

double unit_cost(const BiomassSpec& biomass, const TruckSpec& truck) {
    const double load = truck_load(biomass, truck);
    if (!(load > 0.0)) throw Error(fmt::format("truck {} cannot carry {}", truck.name, biomass_name(biomass.id)));
    return truck.cost_per_km / load;
}

double unit_cost(const BiomassSpec& biomass, const TruckFleet& fleet) {
    return unit_cost(biomass, fleet.for_biomass(biomass.id));
}

double shipment_cost(const BiomassSpec& biomass, double tons, double km, const TruckFleet& fleet) {
    if (!(tons >= 0.0) || !(km >= 0.0)) throw Error("shipment tons and km must be >= 0");
    return unit_cost(biomass, fleet) * tons * km;
}

double haversine_km(GeoPoint a, GeoPoint b) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * rad;
    const double dlon = (b.lon - a.lon) * rad;
    const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(s)));
}

DistanceMatrix read_distance_matrix(std::istream& in, const Dataset& ds, const std::string& source) {
    auto table = csv::read(in);
    std::vector<Issue> issues;
    const auto cs = table.column("supplier_id");
    const auto cp = table.column("plant_id");
    const auto ck = table.column("km");
    if (!cs) issues.push_back({IssueKind::MissingColumn, source, 0, "supplier_id", "column missing"});
    if (!cp) issues.push_back({IssueKind::MissingColumn, source, 0, "plant_id", "column missing"});
    if (!ck) issues.push_back({IssueKind::MissingColumn, source, 0, "km", "column missing"});
    if (!issues.empty()) throw DatasetError(std::move(issues));

    std::map<long long, std::size_t> supplier_pos;
    for (std::size_t i = 0; i < ds.suppliers.size(); ++i) supplier_pos[ds.suppliers[i].province_id] = i;
    std::map<std::string, std::size_t> plant_pos;
    for (std::size_t j = 0; j < ds.plants.size(); ++j) plant_pos[ds.plants[j].plant_id] = j;

    DistanceMatrix m;
    m.km.assign(ds.suppliers.size(), std::vector<std::optional<double>>(ds.plants.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto get = [&](std::size_t c) -> std::string_view { return c < row.size() ? row[c] : std::string_view{}; };
        auto sid = csv::parse_int(get(*cs));
        auto sit = sid ? supplier_pos.find(*sid) : supplier_pos.end();
        if (sit == supplier_pos.end()) {
            issues.push_back({IssueKind::UnknownReference, source, r + 1, "supplier_id",
                              fmt::format("unknown supplier '{}'", get(*cs))});
            continue;
        }
        auto pit = plant_pos.find(std::string(get(*cp)));
        if (pit == plant_pos.end()) {
            issues.push_back({IssueKind::UnknownReference, source, r + 1, "plant_id",
                              fmt::format("unknown plant '{}'", get(*cp))});
            continue;
        }
        auto km = csv::parse_double(get(*ck));
        if (!km || *km < 0.0 || !std::isfinite(*km)) {
            issues.push_back({IssueKind::BadUnit, source, r + 1, "km", "distance must be a non-negative number"});
            continue;
        }
        m.km[sit->second][pit->second] = *km;
    }
    if (!issues.empty()) throw DatasetError(std::move(issues));
    return m;
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path, const Dataset& ds) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
    return read_distance_matrix(in, ds, path.filename().string());
}

DistanceProvider DistanceProvider::haversine(double winding_factor) {
    if (!(winding_factor > 0.0)) throw ConfigError("winding factor must be > 0");
    DistanceProvider p;
    p.mode_ = DistanceMode::Haversine;
    p.winding_ = winding_factor;
    p.fallback_ = true;
    return p;
}

DistanceProvider DistanceProvider::matrix(DistanceMatrix m, bool fallback_to_haversine, double winding_factor) {
    auto p = haversine(winding_factor);
    p.mode_ = DistanceMode::MatrixFile;
    p.matrix_ = std::move(m);
    p.fallback_ = fallback_to_haversine;
    return p;
}

DistanceProvider DistanceProvider::routing(RoutingAdapter adapter, bool fallback_to_haversine,
                                           double winding_factor) {
    auto p = haversine(winding_factor);
    p.mode_ = DistanceMode::RoutingAdapter;
    p.adapter_ = std::move(adapter);
    p.fallback_ = fallback_to_haversine;
    return p;
}

double DistanceProvider::distance(const Dataset& ds, std::size_t supplier, std::size_t plant) const {
    if (supplier >= ds.suppliers.size() || plant >= ds.plants.size())
        throw Error(fmt::format("no supplier {} / plant {} in dataset", supplier, plant));
    if (mode_ == DistanceMode::MatrixFile) {
        if (supplier < matrix_.km.size() && plant < matrix_.km[supplier].size() && matrix_.km[supplier][plant])
            return *matrix_.km[supplier][plant];
        if (!fallback_)
            throw MissingMatrixEntry(fmt::format("no distance from supplier {} to plant {}",
                                                 ds.suppliers[supplier].province_id, ds.plants[plant].plant_id));
    }
    return distance_to(ds.suppliers[supplier].location, ds.plants[plant].location);
}

double DistanceProvider::distance_to(GeoPoint from, GeoPoint to) const {
    if (mode_ == DistanceMode::RoutingAdapter && adapter_) {
        try {
            double km = adapter_(from, to);
            if (!(km >= 0.0)) throw Error("routing adapter returned a negative distance");
            return km;
        } catch (...) {
            if (!fallback_) throw;
        }
    }
    return haversine_km(from, to) * winding_;
}

}  // namespace bioflow
