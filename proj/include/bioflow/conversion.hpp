#pragma once

#include <array>
#include <optional>

#include "bioflow/datamodel.hpp"

namespace bioflow {

/// Methane properties used with the biogas heat-equivalent column.
struct MethaneConstants {
    static constexpr double density = 0.657;  // kg/m3
    static constexpr double cv = 1.709;       // kJ/(kg*K)
    static constexpr double cp = 2.232;       // kJ/(kg*K)
};

inline constexpr double kMjPerMwh = 3600.0;
inline constexpr double kEthanolMwhPerLiter = 5.9313e-3;

/// Thermal-to-electric efficiency for q = 1..4. Defaults are assumptions
/// (no published plant efficiencies): 0.25 / 0.30 / 0.35 / 0.35.
struct EfficiencySet {
    std::array<double, 4> eta{0.25, 0.30, 0.35, 0.35};

    /// Throws for q = 5, which has no thermal efficiency.
    double of(Technology q) const;
    void set(Technology q, double value);

    friend bool operator==(const EfficiencySet&, const EfficiencySet&) = default;
};

/// MJ released by burning `tons`. Throws IneligibleBiomass for feedstock
/// without a heat capacity (molasses, peeled cassava).
double heat_output(const BiomassSpec& biomass, double tons);

/// MJ of biogas heat from anaerobic digestion of `tons`.
double biogas_output(const BiomassSpec& biomass, double tons);

/// Liters of ethanol fermented from `tons`.
double ethanol_output(const BiomassSpec& biomass, double tons);

double electricity_mwh(double heat_mj, double eta);

enum class EnergyCarrier { Electricity, Ethanol };

/// Electricity (MWh) passes through; ethanol liters are converted at
/// 5.9313e-3 MWh per liter.
double mwh_equivalent(EnergyCarrier carrier, double amount);

/// Per-ton output of `biomass` under technology `q`: MWh/ton for q = 1..4,
/// liters/ton for q = 5. nullopt when the pair is ineligible.
std::optional<double> yield_per_ton(const BiomassSpec& biomass, Technology q, const EfficiencySet& eff,
                                    std::optional<double> eta_override = std::nullopt);

/// Heat equivalent over methane content, MJ*kg/(m3*ton). Only defined for
/// biogas-eligible biomass.
std::optional<double> biogas_heat_ratio(const BiomassSpec& biomass);

}  // namespace bioflow
