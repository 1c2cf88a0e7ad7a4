#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lunaflow {

/// Flow kind: continuous commodities admit nonnegative real flow,
/// discrete commodities admit nonnegative integer flow.
enum class FlowKind { Continuous, Discrete };

/// Measurement unit of a commodity flow.
enum class Unit { Kg, Kw, Count };

inline std::string_view to_string(FlowKind k) {
    return k == FlowKind::Continuous ? "continuous" : "discrete";
}

inline std::string_view to_string(Unit u) {
    switch (u) {
        case Unit::Kg: return "kg";
        case Unit::Kw: return "kW";
        case Unit::Count: return "count";
    }
    return "?";
}

/// One tracked mass/power flow in the logistics network.
struct Commodity {
    std::string id;
    FlowKind kind{FlowKind::Continuous};
    Unit unit{Unit::Kg};
    /// Mass contributed per flow unit: 1 for kg commodities, 0 for power,
    /// vehicle structure mass for count commodities. Used for launch pricing
    /// and propellant sizing.
    double mass_per_unit{1.0};
};

/// Ordered registry of commodities. Indices are stable and define the
/// coordinate order of transformation matrices and flow vectors.
class CommodityRegistry {
public:
    std::size_t add(Commodity c) {
        if (index_.count(c.id) != 0) {
            throw std::invalid_argument("duplicate commodity id: " + c.id);
        }
        index_.emplace(c.id, items_.size());
        items_.push_back(std::move(c));
        return items_.size() - 1;
    }

    std::size_t size() const { return items_.size(); }
    const Commodity& at(std::size_t i) const { return items_.at(i); }

    bool contains(std::string_view id) const { return index_.count(std::string(id)) != 0; }

    std::size_t index_of(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) {
            throw std::out_of_range("unknown commodity: " + std::string(id));
        }
        return it->second;
    }

    const Commodity& get(std::string_view id) const { return items_[index_of(id)]; }

    const std::vector<Commodity>& items() const { return items_; }

private:
    std::vector<Commodity> items_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// The 15 baseline commodities in flow-vector order: soil, slag, dsoil,
/// spares, O2, H2, H2O, emissions, metals, excavator, SWE, DWE, MRE,
/// power, FSPS. Power is the only kW entry; plant commodities are sized
/// continuously as deployed mass.
inline CommodityRegistry register_baseline_commodities() {
    CommodityRegistry reg;
    auto kg = [&](const char* id) { reg.add(Commodity{id, FlowKind::Continuous, Unit::Kg, 1.0}); };
    kg("soil");
    kg("slag");
    kg("dsoil");
    kg("spares");
    kg("O2");
    kg("H2");
    kg("H2O");
    kg("emissions");
    kg("metals");
    kg("excavator");
    kg("SWE");
    kg("DWE");
    kg("MRE");
    reg.add(Commodity{"power", FlowKind::Continuous, Unit::Kw, 0.0});
    kg("FSPS");
    return reg;
}

/// Appends the discrete spacecraft-count commodity used by scenarios that
/// price and capacity-limit integer vehicles. `structure_mass_kg` is the
/// per-vehicle dry mass that counts toward lifted and decelerated mass.
inline std::size_t extend_with_spacecraft(CommodityRegistry& reg, double structure_mass_kg) {
    return reg.add(Commodity{"spacecraft", FlowKind::Discrete, Unit::Count, structure_mass_kg});
}

}  // namespace lunaflow
