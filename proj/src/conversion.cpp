#include "bioflow/conversion.hpp"

#include <fmt/format.h>

namespace bioflow {

namespace {

void require_nonnegative(double tons) {
    if (!(tons >= 0.0)) throw Error(fmt::format("feedstock quantity must be >= 0, got {}", tons));
}

[[noreturn]] void ineligible(const BiomassSpec& b, std::string_view use) {
    throw IneligibleBiomass(fmt::format("{} cannot be used for {}", biomass_name(b.id), use));
}

}  // namespace

double EfficiencySet::of(Technology q) const {
    int i = tech_index(q);
    if (i < 1 || i > 4) throw Error("fermentation has no thermal efficiency");
    return eta[static_cast<std::size_t>(i - 1)];
}

void EfficiencySet::set(Technology q, double value) {
    int i = tech_index(q);
    if (i < 1 || i > 4) throw Error("fermentation has no thermal efficiency");
    if (!(value > 0.0 && value <= 1.0)) throw Error(fmt::format("efficiency must lie in (0, 1], got {}", value));
    eta[static_cast<std::size_t>(i - 1)] = value;
}

double heat_output(const BiomassSpec& biomass, double tons) {
    require_nonnegative(tons);
    if (!biomass.heat_capacity) ineligible(biomass, "heat conversion");
    return *biomass.heat_capacity * tons;
}

double biogas_output(const BiomassSpec& biomass, double tons) {
    require_nonnegative(tons);
    if (!biomass.eligible(Technology::AnaerobicDigestion) || !biomass.biogas_heat_equiv)
        ineligible(biomass, "biogas conversion");
    return *biomass.biogas_heat_equiv * tons;
}

double ethanol_output(const BiomassSpec& biomass, double tons) {
    require_nonnegative(tons);
    if (!biomass.eligible(Technology::Fermentation) || !biomass.ethanol_coeff)
        ineligible(biomass, "bio-ethanol conversion");
    return tons * 1000.0 / *biomass.ethanol_coeff;
}

double electricity_mwh(double heat_mj, double eta) {
    if (!(heat_mj >= 0.0)) throw Error(fmt::format("heat must be >= 0, got {}", heat_mj));
    if (!(eta > 0.0 && eta <= 1.0)) throw Error(fmt::format("efficiency must lie in (0, 1], got {}", eta));
    return heat_mj * eta / kMjPerMwh;
}

double mwh_equivalent(EnergyCarrier carrier, double amount) {
    if (!(amount >= 0.0)) throw Error(fmt::format("energy amount must be >= 0, got {}", amount));
    return carrier == EnergyCarrier::Ethanol ? amount * kEthanolMwhPerLiter : amount;
}

std::optional<double> yield_per_ton(const BiomassSpec& biomass, Technology q, const EfficiencySet& eff,
                                    std::optional<double> eta_override) {
    if (!biomass.eligible(q)) return std::nullopt;
    switch (q) {
        case Technology::DirectFiring:
        case Technology::Gasification:
        case Technology::CoGeneration:
            if (!biomass.heat_capacity) return std::nullopt;
            return electricity_mwh(heat_output(biomass, 1.0), eta_override.value_or(eff.of(q)));
        case Technology::AnaerobicDigestion:
            if (!biomass.biogas_heat_equiv) return std::nullopt;
            return electricity_mwh(biogas_output(biomass, 1.0), eta_override.value_or(eff.of(q)));
        case Technology::Fermentation:
            if (!biomass.ethanol_coeff) return std::nullopt;
            return ethanol_output(biomass, 1.0);
    }
    return std::nullopt;
}

std::optional<double> biogas_heat_ratio(const BiomassSpec& biomass) {
    if (!biomass.eligible(Technology::AnaerobicDigestion) || !biomass.biogas_heat_equiv ||
        !biomass.methane_content || *biomass.methane_content <= 0.0)
        return std::nullopt;
    return *biomass.biogas_heat_equiv / *biomass.methane_content;
}

}  // namespace bioflow
