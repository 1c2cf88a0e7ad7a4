#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lunaflow/commodity.hpp"
#include "lunaflow/network.hpp"

namespace lunaflow {

constexpr double kStandardGravity = 9.80665;  // m/s^2

/// Annual productivity of one surface component, normalized per kg of
/// deployed plant mass. Production and consumption rates are stored
/// positive; the sign convention is applied when the transformation
/// matrix is assembled. Power is kW per kg plant, negative for consumers
/// and positive for the generator.
struct ComponentRates {
    std::string component;                       // commodity id of the plant
    std::map<std::string, double> products;      // commodity -> alpha
    std::map<std::string, double> consumptions;  // commodity -> beta (stored positive)
    double power_kw_per_kg{0.0};
};

using ComponentRateSet = std::map<std::string, ComponentRates>;

/// Productivity table for the five baseline surface components.
inline ComponentRateSet baseline_component_rates() {
    ComponentRateSet set;
    set["MRE"] = ComponentRates{
        "MRE",
        {{"O2", 16.67}, {"metals", 15.16}, {"slag", 6.06}},
        {{"dsoil", 37.89}},
        -0.0942};
    set["SWE"] = ComponentRates{
        "SWE",
        {{"H2O", 10.50}, {"dsoil", 173.48}, {"emissions", 3.52}},
        {{"soil", 187.5}},
        -0.0359};
    set["DWE"] = ComponentRates{
        "DWE",
        {{"O2", 31.12}, {"H2", 3.88}},
        {{"H2O", 35.0}},
        -0.0700};
    set["excavator"] = ComponentRates{
        "excavator",
        {{"soil", 333.33}},
        {},
        -0.00113};
    set["FSPS"] = ComponentRates{"FSPS", {}, {}, 0.00667};
    return set;
}

/// Reported mass split of the aggregate metals byproduct, kg per kg plant
/// per year. The flow network carries the aggregate only.
inline const std::map<std::string, double>& mre_metal_split_rates() {
    static const std::map<std::string, double> split{
        {"Si", 7.43}, {"Fe", 3.71}, {"Al", 2.08}, {"Ti", 1.94}};
    return split;
}

/// Assembles the surface-processing transformation matrix: identity
/// diagonal, production entries +alpha * dt at (product row, plant
/// column), consumption entries -beta * dt, and the power row carrying
/// -P * dt for consumers and +P * dt for the generator.
inline TransformationMatrix build_isru_q_matrix(const ComponentRateSet& rates,
                                                const CommodityRegistry& registry,
                                                double timestep_years) {
    if (timestep_years <= 0.0) {
        throw std::invalid_argument("build_isru_q_matrix: timestep_years must be positive");
    }
    for (const char* required : {"MRE", "SWE", "DWE", "excavator", "FSPS"}) {
        if (rates.count(required) == 0) {
            throw std::invalid_argument(std::string("build_isru_q_matrix: missing rates for ") + required);
        }
    }

    TransformationMatrix q(registry.size());
    const std::size_t power_row = registry.index_of("power");
    for (const auto& [name, r] : rates) {
        const std::size_t col = registry.index_of(name);  // throws on unregistered component
        for (const auto& [commodity, alpha] : r.products) {
            q(registry.index_of(commodity), col) += alpha * timestep_years;
        }
        for (const auto& [commodity, beta] : r.consumptions) {
            q(registry.index_of(commodity), col) -= beta * timestep_years;
        }
        if (col != power_row) {
            q(power_row, col) += r.power_kw_per_kg * timestep_years;
        }
    }
    return q;
}

/// Propulsion system parameters (Table-3 style assumptions).
struct PropulsionSpec {
    double isp_s{420.0};
    double g0{kStandardGravity};
    double structure_mass_kg{6000.0};
    double propellant_capacity_kg{65000.0};

    double exhaust_velocity() const { return isp_s * g0; }
};

/// Delta-v lookup per (from, to) leg, m/s. Missing legs mean no propulsive
/// burn (surface transfers, priced launches).
struct DeltaVTable {
    std::map<std::pair<std::string, std::string>, double> legs;

    void set(const std::string& from, const std::string& to, double dv) {
        if (dv < 0.0) throw std::invalid_argument("delta-v must be nonnegative");
        legs[{from, to}] = dv;
    }
    double get(const std::string& from, const std::string& to) const {
        auto it = legs.find({from, to});
        return it == legs.end() ? 0.0 : it->second;
    }
};

/// Rocket-equation propellant burn for delivering `delivered_mass`
/// (payload plus structure, i.e. final mass) across `deltav`.
inline double propellant_for_leg(double deltav, double delivered_mass, const PropulsionSpec& spec) {
    if (deltav < 0.0) throw std::invalid_argument("propellant_for_leg: deltav must be nonnegative");
    if (delivered_mass < 0.0) {
        throw std::invalid_argument("propellant_for_leg: delivered_mass must be nonnegative");
    }
    if (spec.isp_s <= 0.0) throw std::invalid_argument("propellant_for_leg: isp must be positive");
    return delivered_mass * std::expm1(deltav / spec.exhaust_velocity());
}

/// True when a single vehicle's tanks can hold the leg's burn.
inline bool leg_feasible(double propellant, const PropulsionSpec& spec) {
    if (propellant < 0.0) throw std::invalid_argument("leg_feasible: propellant must be nonnegative");
    return propellant <= spec.propellant_capacity_kg;
}

/// Total spares mass needed to keep `deployed_plant_mass` running for
/// `years` at the given annual maintenance fraction.
inline double maintenance_demand(double deployed_plant_mass, double rate_per_year, int years) {
    if (rate_per_year < 0.0 || rate_per_year > 1.0) {
        throw std::invalid_argument("maintenance_demand: rate must lie in [0,1]");
    }
    return deployed_plant_mass * rate_per_year * static_cast<double>(years);
}

/// Mass-fraction split of an LO2/LH2 burn. `mixture_ratio` is the oxidizer
/// to fuel mass ratio (6:1 baseline).
struct PropellantMix {
    double o2_fraction;
    double h2_fraction;
};

inline PropellantMix propellant_mix(double mixture_ratio) {
    if (mixture_ratio <= 0.0) throw std::invalid_argument("mixture_ratio must be positive");
    return PropellantMix{mixture_ratio / (1.0 + mixture_ratio), 1.0 / (1.0 + mixture_ratio)};
}

/// Transformation matrix for a propulsive transport leg. All commodities
/// pass through; the O2 and H2 rows lose the burn, which is
/// (1 - e^{-dv/ve}) of the departing mass (the exact rocket-equation burn
/// when surplus propellant is itself decelerated as payload). Mass per
/// flow unit comes from the registry so vehicle counts weigh in at their
/// structure mass.
inline TransformationMatrix build_propulsive_q_matrix(double deltav, const PropulsionSpec& spec,
                                                      double mixture_ratio,
                                                      const CommodityRegistry& registry) {
    if (deltav < 0.0) throw std::invalid_argument("build_propulsive_q_matrix: deltav must be nonnegative");
    TransformationMatrix q(registry.size());
    if (deltav == 0.0) return q;

    const double burn_per_kg_departing = -std::expm1(-deltav / spec.exhaust_velocity());
    const PropellantMix mix = propellant_mix(mixture_ratio);
    const std::size_t o2 = registry.index_of("O2");
    const std::size_t h2 = registry.index_of("H2");
    for (std::size_t j = 0; j < registry.size(); ++j) {
        const double w = registry.at(j).mass_per_unit;
        if (w == 0.0) continue;
        q(o2, j) -= mix.o2_fraction * burn_per_kg_departing * w;
        q(h2, j) -= mix.h2_fraction * burn_per_kg_departing * w;
    }
    return q;
}

/// Concurrency rows for a propulsive leg: the burned propellant must fit
/// the tanks of the vehicles flying the leg, and the O2/H2 arriving after
/// the burn must be nonnegative (a leg cannot fly short of propellant).
inline std::vector<ConcurrencyRow> propulsive_concurrency_rows(double deltav,
                                                               const PropulsionSpec& spec,
                                                               double mixture_ratio,
                                                               const CommodityRegistry& registry,
                                                               const std::string& vehicle_commodity) {
    std::vector<ConcurrencyRow> rows;
    if (deltav == 0.0) return rows;
    const double burn_per_kg_departing = -std::expm1(-deltav / spec.exhaust_velocity());

    ConcurrencyRow tank;
    tank.description = "propellant burn within tank capacity";
    for (std::size_t j = 0; j < registry.size(); ++j) {
        const double w = registry.at(j).mass_per_unit;
        if (w != 0.0) tank.coefficients[registry.at(j).id] += burn_per_kg_departing * w;
    }
    tank.coefficients[vehicle_commodity] -= spec.propellant_capacity_kg;
    tank.bound = 0.0;
    rows.push_back(std::move(tank));

    const TransformationMatrix q = build_propulsive_q_matrix(deltav, spec, mixture_ratio, registry);
    for (const char* gas : {"O2", "H2"}) {
        ConcurrencyRow arrive;
        arrive.description = std::string("arriving ") + gas + " nonnegative";
        const std::size_t row = registry.index_of(gas);
        for (std::size_t j = 0; j < registry.size(); ++j) {
            double c = -q(row, j);
            if (c != 0.0) arrive.coefficients[registry.at(j).id] = c;
        }
        arrive.bound = 0.0;
        rows.push_back(std::move(arrive));
    }
    return rows;
}

}  // namespace lunaflow
