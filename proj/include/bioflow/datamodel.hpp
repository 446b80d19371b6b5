#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bioflow/errors.hpp"

namespace bioflow {

enum class Biomass : std::uint8_t {
    RiceStraw,
    RiceHusk,
    SugarcaneLeaves,
    Bagasse,
    Molasses,
    CornLeavesAndTops,
    CornCob,
    PeeledCassava,
    CassavaRhizome,
    CassavaFiber,
    CassavaPeels,
    OilPalmBunch,
    OilPalmFiber,
    OilPalmShell,
    CoconutBunch,
    CoconutBract,
    CoconutShell,
};

inline constexpr std::size_t kBiomassCount = 17;

std::string_view biomass_name(Biomass b);
/// Accepts the display name ("rice straw") case-insensitively, with '_' or
/// '-' in place of spaces.
std::optional<Biomass> parse_biomass(std::string_view text);

/// Conversion technology. Values are the q indices 1..5.
enum class Technology : std::uint8_t {
    DirectFiring = 1,
    Gasification = 2,
    CoGeneration = 3,
    AnaerobicDigestion = 4,
    Fermentation = 5,
};

constexpr int tech_index(Technology q) { return static_cast<int>(q); }
std::optional<Technology> technology_from_index(int q);
std::string_view technology_name(Technology q);

class TechSet {
public:
    constexpr TechSet() = default;
    constexpr TechSet(std::initializer_list<int> qs) {
        for (int q : qs) bits_ |= static_cast<std::uint8_t>(1u << q);
    }

    constexpr bool contains(Technology q) const { return (bits_ >> tech_index(q)) & 1u; }
    constexpr bool contains(int q) const { return q >= 1 && q <= 5 && ((bits_ >> q) & 1u); }
    void insert(Technology q) { bits_ |= static_cast<std::uint8_t>(1u << tech_index(q)); }
    void erase(Technology q) { bits_ &= static_cast<std::uint8_t>(~(1u << tech_index(q))); }
    constexpr bool empty() const { return bits_ == 0; }

    /// "1|2|3" style.
    std::string to_string() const;
    static std::optional<TechSet> parse(std::string_view text);

    friend constexpr bool operator==(TechSet, TechSet) = default;

private:
    std::uint8_t bits_ = 0;
};

struct BiomassSpec {
    Biomass id{};
    double price = 0.0;                          // THB/ton
    std::optional<double> heat_capacity;         // MJ/ton
    std::optional<double> methane_content;       // m3/kg
    std::optional<double> biogas_heat_equiv;     // MJ/ton
    double density = 0.0;                        // kg/m3
    std::optional<double> ethanol_coeff;         // kg feedstock per liter ethanol
    TechSet eligible_techs;

    bool eligible(Technology q) const { return eligible_techs.contains(q); }

    friend bool operator==(const BiomassSpec&, const BiomassSpec&) = default;
};

/// Problems with a spec, empty when the spec is consistent.
std::vector<std::string> check_biomass_spec(const BiomassSpec& spec);

/// The 17 feedstocks with prices, heat capacities, methane yields,
/// densities and ethanol coefficients as published for Thailand.
const std::vector<BiomassSpec>& builtin_biomass_table();
const BiomassSpec& builtin_biomass(Biomass b);

/// CSV with one row per biomass; absent optionals are empty cells.
void write_biomass_table(std::ostream& out, const std::vector<BiomassSpec>& table);
std::vector<BiomassSpec> parse_biomass_table(std::istream& in, const std::string& source = "<biomass>");

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct SupplierProfile {
    int province_id = 0;
    std::string name;
    GeoPoint location;
    /// tons, [biomass index into Dataset::biomass][month]
    std::vector<std::vector<double>> availability;

    friend bool operator==(const SupplierProfile&, const SupplierProfile&) = default;
};

enum class PlantKind : std::uint8_t { BiomassPower, BiogasPower, Ethanol };

inline constexpr std::array<PlantKind, 3> kPlantKinds{PlantKind::BiomassPower, PlantKind::BiogasPower,
                                                      PlantKind::Ethanol};

std::string_view plant_kind_name(PlantKind k);
std::optional<PlantKind> parse_plant_kind(std::string_view text);
bool kind_allows(PlantKind k, Technology q);
inline bool is_power(PlantKind k) { return k != PlantKind::Ethanol; }

struct Plant {
    std::string plant_id;
    PlantKind kind{};
    Technology technology{};
    double capacity = 0.0;        // MW, or liters/day for ethanol
    double max_inventory = 0.0;   // tons
    double holding_cost = 0.0;    // THB/(ton*month)
    bool holding_cost_defaulted = false;
    GeoPoint location;
    std::optional<double> efficiency_override;

    friend bool operator==(const Plant&, const Plant&) = default;
};

struct DemandTargets {
    double biomass_mw = 0.0;
    double biogas_mw = 0.0;
    double ethanol_ml_per_day = 0.0;

    double of(PlantKind k) const;

    friend bool operator==(const DemandTargets&, const DemandTargets&) = default;
};

/// National consumption targets: 3940 MW, 387 MW, 4.79 ML/day.
DemandTargets aedp_targets();

struct Month {
    std::string name;
    int days = 0;
    double hours = 0.0;

    friend bool operator==(const Month&, const Month&) = default;
};

struct TimeGrid {
    std::vector<Month> months;

    std::size_t size() const { return months.size(); }
    double total_hours() const;
    int total_days() const;

    /// Non-leap civil year, Jan..Dec.
    static TimeGrid civil_year();
    /// First `n` months of the civil year.
    static TimeGrid first_months(std::size_t n);

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct Dataset {
    std::vector<BiomassSpec> biomass;
    std::vector<SupplierProfile> suppliers;
    std::vector<Plant> plants;
    TimeGrid timegrid;
    DemandTargets demand;

    std::optional<std::size_t> biomass_index(Biomass b) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Every invariant violation in `ds`; empty when the dataset is valid.
std::vector<Issue> validate_dataset(const Dataset& ds);

struct DatasetOptions {
    DemandTargets demand = aedp_targets();
    double default_holding_cost = 50.0;
    /// Restrict the dataset to these biomass types (all 17 when empty).
    std::vector<Biomass> biomass_subset;
};

/// Reads `suppliers.csv` and `plants.csv`. Throws DatasetError listing every
/// problem found; IoError when a file cannot be opened.
Dataset load_dataset(const std::filesystem::path& supplier_file, const std::filesystem::path& plant_file,
                     const DatasetOptions& options = {});

/// Stream variants, used by the file loader and by tests.
Dataset parse_dataset(std::istream& suppliers, const std::string& supplier_name, std::istream& plants,
                      const std::string& plant_name, const DatasetOptions& options = {});

void write_suppliers_csv(std::ostream& out, const Dataset& ds);
void write_plants_csv(std::ostream& out, const Dataset& ds);

/// Seeded desk-scale dataset: n_biomass types from the built-in table,
/// seasonal availability (4 peak months carrying 70% of the year), plants of
/// every kind the chosen feedstocks can serve.
Dataset synth_dataset(std::uint64_t seed, std::size_t n_suppliers, std::size_t n_biomass, std::size_t n_plants);

}  // namespace bioflow
