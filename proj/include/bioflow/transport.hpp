#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bioflow/datamodel.hpp"

namespace bioflow {

/// Variable truck cost (fuel, tires, maintenance), THB per km.
inline constexpr double kTruckCostPerKm = 6.561;

struct TruckSpec {
    std::string name;
    double payload = 0.0;                 // tons
    std::optional<double> cargo_volume;   // m3; absent for weight-limited tankers
    double cost_per_km = kTruckCostPerKm; // THB/km

    /// 10-wheel flatbed, 16 t payload, 36.4 m3 cargo.
    static TruckSpec flatbed10w();
    /// Petroleum tank truck for molasses, 28.5 t payload.
    static TruckSpec tanker();
};

struct TruckFleet {
    TruckSpec flatbed = TruckSpec::flatbed10w();
    TruckSpec tanker = TruckSpec::tanker();

    /// Molasses travels by tanker, everything else by flatbed.
    const TruckSpec& for_biomass(Biomass b) const { return b == Biomass::Molasses ? tanker : flatbed; }
};

/// Tons per trip: the lesser of payload and what the cargo volume holds.
double truck_load(const BiomassSpec& biomass, const TruckSpec& truck);

/// THB per (km * ton), unrounded.
double unit_cost(const BiomassSpec& biomass, const TruckSpec& truck);
double unit_cost(const BiomassSpec& biomass, const TruckFleet& fleet = {});

double shipment_cost(const BiomassSpec& biomass, double tons, double km, const TruckFleet& fleet = {});

inline constexpr double kEarthRadiusKm = 6371.0;

double haversine_km(GeoPoint a, GeoPoint b);

/// Road distance backend: two coordinates in, km out. Must throw on failure.
using RoutingAdapter = std::function<double(GeoPoint, GeoPoint)>;

enum class DistanceMode { MatrixFile, Haversine, RoutingAdapter };

struct DistanceMatrix {
    /// km indexed [supplier position][plant position]; nullopt = no entry.
    std::vector<std::vector<std::optional<double>>> km;
};

/// Reads `distances.csv` (supplier_id,plant_id,km) against the dataset's
/// supplier province ids and plant ids.
DistanceMatrix read_distance_matrix(std::istream& in, const Dataset& ds, const std::string& source = "distances.csv");
DistanceMatrix load_distance_matrix(const std::filesystem::path& path, const Dataset& ds);

/// Supplier-to-plant distances. Matrix lookups first; missing entries fall
/// back to great-circle km times a winding factor unless fallback is off.
class DistanceProvider {
public:
    static DistanceProvider haversine(double winding_factor = 1.3);
    static DistanceProvider matrix(DistanceMatrix m, bool fallback_to_haversine = false,
                                   double winding_factor = 1.3);
    static DistanceProvider routing(RoutingAdapter adapter, bool fallback_to_haversine = false,
                                    double winding_factor = 1.3);

    DistanceMode mode() const { return mode_; }
    double winding_factor() const { return winding_; }

    double distance(const Dataset& ds, std::size_t supplier, std::size_t plant) const;
    /// Distance to a point that is not a dataset plant (candidate sites).
    double distance_to(GeoPoint from, GeoPoint to) const;

private:
    DistanceMode mode_ = DistanceMode::Haversine;
    double winding_ = 1.3;
    bool fallback_ = true;
    DistanceMatrix matrix_;
    RoutingAdapter adapter_;
};

}  // namespace bioflow
