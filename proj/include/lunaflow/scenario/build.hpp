#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lunaflow/compile.hpp"
#include "lunaflow/network.hpp"
#include "lunaflow/replay.hpp"
#include "lunaflow/scenario/config.hpp"
#include "lunaflow/transform.hpp"

namespace lunaflow {

/// Closed-form surface-plant sizing: each plant is the annual output it
/// must produce divided by its per-kg rate, the excavator covers the soil
/// intake of the extractor, and the power system covers the summed draw.
/// The optimizer is free to choose differently; this oracle feeds the
/// spares schedule and the verification tests.
struct PlantSizing {
    double mre{0.0};
    double swe{0.0};
    double dwe{0.0};
    double excavator{0.0};
    double fsps{0.0};
    double power_kw{0.0};

    double total() const { return mre + swe + dwe + excavator + fsps; }
};

inline PlantSizing size_plants(const ScenarioConfig& cfg) {
    PlantSizing s;
    const double o2 = cfg.effective_o2_per_year();
    const double h2o = cfg.effective_h2o_per_year();
    if (o2 == 0.0 && h2o == 0.0) return s;

    auto rate = [&](const std::string& comp, const std::string& commodity, bool product) {
        auto it = cfg.component_rates.find(comp);
        if (it == cfg.component_rates.end()) {
            throw std::invalid_argument("size_plants: missing rates for " + comp);
        }
        const auto& table = product ? it->second.products : it->second.consumptions;
        auto jt = table.find(commodity);
        return jt == table.end() ? 0.0 : jt->second;
    };
    auto require_positive = [](double r, const std::string& what) {
        if (r <= 0.0) throw std::invalid_argument("size_plants: cannot size " + what + " (rate <= 0)");
        return r;
    };

    if (o2 > 0.0) s.mre = o2 / require_positive(rate("MRE", "O2", true), "MRE for O2");
    double dsoil_need = rate("MRE", "dsoil", false) * s.mre;
    double swe_for_h2o = h2o > 0.0 ? h2o / require_positive(rate("SWE", "H2O", true), "SWE for H2O") : 0.0;
    double swe_for_dsoil =
        dsoil_need > 0.0 ? dsoil_need / require_positive(rate("SWE", "dsoil", true), "SWE for dsoil") : 0.0;
    s.swe = std::max(swe_for_h2o, swe_for_dsoil);
    double soil_need = rate("SWE", "soil", false) * s.swe;
    if (soil_need > 0.0) {
        s.excavator = soil_need / require_positive(rate("excavator", "soil", true), "excavator");
    }

    for (const auto& [name, r] : cfg.component_rates) {
        double mass = 0.0;
        if (name == "MRE") mass = s.mre;
        else if (name == "SWE") mass = s.swe;
        else if (name == "DWE") mass = s.dwe;
        else if (name == "excavator") mass = s.excavator;
        else continue;
        if (r.power_kw_per_kg < 0.0) s.power_kw += -r.power_kw_per_kg * mass;
    }
    if (s.power_kw > 0.0) {
        auto it = cfg.component_rates.find("FSPS");
        double gen = it == cfg.component_rates.end() ? 0.0 : it->second.power_kw_per_kg;
        if (gen <= 0.0) throw std::invalid_argument("size_plants: cannot size FSPS (rate <= 0)");
        s.fsps = s.power_kw / gen;
    }
    return s;
}

/// Commodities Earth can source without bound (purchasable goods).
inline const std::vector<std::string>& earth_supplied_commodities() {
    static const std::vector<std::string> v{"O2", "H2",  "H2O", "spares",    "excavator",
                                            "SWE", "DWE", "MRE", "FSPS",      "spacecraft"};
    return v;
}

/// Commodities locked to zero flow in the Earth-dependent scenario.
inline const std::vector<std::string>& isru_commodity_group() {
    static const std::vector<std::string> v{"soil", "slag", "dsoil", "emissions", "metals",
                                            "excavator", "SWE", "DWE", "MRE", "FSPS", "power"};
    return v;
}

inline const std::vector<std::string>& byproduct_commodity_group() {
    static const std::vector<std::string> v{"slag", "metals", "emissions", "dsoil"};
    return v;
}

struct BuildResult {
    TimeExpandedGraph graph;
    DemandMap demands;
    CostTable costs;
    PlantSizing sizing;
    ReplayInputs replay_inputs;
};

namespace detail {

inline const NodeDecl* find_kind(const ScenarioConfig& cfg, NodeKind kind) {
    for (const auto& n : cfg.network_nodes) {
        if (n.kind == kind) return &n;
    }
    return nullptr;
}

inline BuildResult build_common(const ScenarioConfig& cfg) {
    const double timestep_years = 1.0;  // planning grid: one step per year
    const int last = cfg.horizon_years;

    CommodityRegistry registry = register_baseline_commodities();
    extend_with_spacecraft(registry, cfg.propulsion.structure_mass_kg);

    const NodeDecl* earth = find_kind(cfg, NodeKind::Earth);
    const NodeDecl* habitat = find_kind(cfg, NodeKind::Habitat);
    const NodeDecl* surface = find_kind(cfg, NodeKind::LunarSurface);
    if (earth == nullptr) throw std::invalid_argument("scenario network needs an earth node");
    if (habitat == nullptr) throw std::invalid_argument("scenario network needs a habitat node");
    if (cfg.isru_enabled && surface == nullptr) {
        throw std::invalid_argument("ISRU scenario needs a lunar_surface node");
    }

    PlantSizing sizing;
    if (cfg.isru_enabled) sizing = size_plants(cfg);

    std::vector<Node> nodes;
    for (const auto& decl : cfg.network_nodes) {
        Node n;
        n.id = decl.id;
        n.kind = decl.kind;
        if (decl.id == earth->id) {
            for (int t = 0; t <= last; ++t) {
                for (const auto& cid : earth_supplied_commodities()) {
                    n.set_supply(cid, t, kInfinity);
                }
            }
        }
        if (decl.id == habitat->id) {
            for (int t = 1; t <= last; ++t) {
                if (cfg.effective_o2_per_year() > 0.0) n.set_demand("O2", t, cfg.effective_o2_per_year());
                if (cfg.effective_h2o_per_year() > 0.0) {
                    n.set_demand("H2O", t, cfg.effective_h2o_per_year());
                }
            }
        }
        if (cfg.isru_enabled && surface != nullptr && decl.id == surface->id) {
            double annual_spares = maintenance_demand(sizing.total(), cfg.maintenance_rate_per_year, 1);
            if (annual_spares > 0.0) {
                for (int t = 1; t <= last; ++t) n.set_demand("spares", t, annual_spares);
            }
        }
        nodes.push_back(std::move(n));
    }

    const TimeWindow power_lock{{"power"}, {}};
    TimeWindow isru_lock{isru_commodity_group(), {}};

    std::vector<ArcSpec> arcs;
    for (const auto& decl : cfg.network_arcs) {
        ArcSpec a;
        a.from = decl.from;
        a.to = decl.to;
        a.kind = decl.kind;
        a.time_of_flight = decl.time_of_flight;

        bool disposal_arc = false;
        for (const auto& nd : cfg.network_nodes) {
            if (nd.id == decl.to && nd.kind == NodeKind::Disposal) disposal_arc = true;
        }

        if (decl.kind == ArcKind::Transformation) {
            a.transformation = build_isru_q_matrix(cfg.component_rates, registry, timestep_years);
        } else {
            double dv = cfg.delta_v.get(decl.from, decl.to);
            if (dv > 0.0) {
                a.transformation =
                    build_propulsive_q_matrix(dv, cfg.propulsion, cfg.costs.mixture_ratio, registry);
                a.concurrency_rows = propulsive_concurrency_rows(dv, cfg.propulsion,
                                                                 cfg.costs.mixture_ratio, registry,
                                                                 "spacecraft");
                if (cfg.costs.spacecraft_operation_per_flight > 0.0) {
                    a.cost_items.push_back({"spacecraft", cfg.costs.spacecraft_operation_per_flight,
                                            CostClass::Operations});
                }
            }
            if (decl.from == earth->id) {
                for (const auto& com : registry.items()) {
                    if (com.mass_per_unit > 0.0 && cfg.costs.launch_per_kg > 0.0) {
                        a.cost_items.push_back({com.id, cfg.costs.launch_per_kg * com.mass_per_unit,
                                                CostClass::Launch});
                    }
                }
                if (cfg.costs.lo2_per_kg > 0.0) {
                    a.cost_items.push_back({"O2", cfg.costs.lo2_per_kg, CostClass::Propellant});
                }
                if (cfg.costs.lh2_per_kg > 0.0) {
                    a.cost_items.push_back({"H2", cfg.costs.lh2_per_kg, CostClass::Propellant});
                }
                if (cfg.costs.spacecraft_manufacturing > 0.0) {
                    a.cost_items.push_back({"spacecraft", cfg.costs.spacecraft_manufacturing,
                                            CostClass::Hardware});
                }
            }
        }

        if (disposal_arc) {
            if (cfg.disposal_open.has_value()) {
                a.windows.push_back(TimeWindow{byproduct_commodity_group(), *cfg.disposal_open});
            }
        } else {
            a.windows.push_back(power_lock);  // power is not storable or transportable
        }
        if (!cfg.isru_enabled) a.windows.push_back(isru_lock);
        arcs.push_back(std::move(a));
    }

    ExpandOptions opts;
    opts.holdover_windows.push_back(power_lock);
    if (!cfg.isru_enabled) opts.holdover_windows.push_back(isru_lock);

    std::vector<int> horizon;
    for (int t = 0; t <= last; ++t) horizon.push_back(t);

    BuildResult out;
    out.graph = expand(std::move(registry), std::move(nodes), std::move(arcs), std::move(horizon), opts);
    out.demands = collect_demands(out.graph);
    out.costs = CostTable::from_graph(out.graph);
    out.sizing = sizing;
    out.replay_inputs = ReplayInputs{cfg.component_rates, cfg.propulsion, cfg.delta_v,
                                     cfg.costs.mixture_ratio, timestep_years};
    return out;
}

}  // namespace detail

inline BuildResult build_isru_scenario(const ScenarioConfig& cfg) {
    if (!cfg.isru_enabled) {
        throw std::invalid_argument("build_isru_scenario requires isru_enabled = true");
    }
    return detail::build_common(cfg);
}

inline BuildResult build_earth_dependent_scenario(const ScenarioConfig& cfg) {
    if (cfg.isru_enabled) {
        throw std::invalid_argument("build_earth_dependent_scenario requires isru_enabled = false");
    }
    return detail::build_common(cfg);
}

inline BuildResult build_scenario(const ScenarioConfig& cfg) {
    return cfg.isru_enabled ? build_isru_scenario(cfg) : build_earth_dependent_scenario(cfg);
}

/// File-level semantic checks run before any build: rate tables must
/// reference known commodities, the network must name the required node
/// kinds with known endpoints, and window schedules must fit the horizon.
inline std::vector<Diagnostic> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<Diagnostic> out;
    CommodityRegistry registry = register_baseline_commodities();
    extend_with_spacecraft(registry, cfg.propulsion.structure_mass_kg);

    for (const auto& [name, r] : cfg.component_rates) {
        if (!registry.contains(name)) {
            out.push_back({"rates for unknown component commodity '" + name + "'", "", "", -1});
        }
        for (const auto& [cid, rate] : r.products) {
            (void)rate;
            if (!registry.contains(cid)) {
                out.push_back({"rates." + name + " produces unknown commodity '" + cid + "'", "", "", -1});
            }
        }
        for (const auto& [cid, rate] : r.consumptions) {
            (void)rate;
            if (!registry.contains(cid)) {
                out.push_back({"rates." + name + " consumes unknown commodity '" + cid + "'", "", "", -1});
            }
        }
    }

    std::set<std::string> node_ids;
    for (const auto& n : cfg.network_nodes) {
        if (!node_ids.insert(n.id).second) out.push_back({"duplicate node id", n.id, "", -1});
    }
    if (detail::find_kind(cfg, NodeKind::Earth) == nullptr) {
        out.push_back({"network has no earth node", "", "", -1});
    }
    if (detail::find_kind(cfg, NodeKind::Habitat) == nullptr) {
        out.push_back({"network has no habitat node", "", "", -1});
    }
    if (cfg.isru_enabled && detail::find_kind(cfg, NodeKind::LunarSurface) == nullptr) {
        out.push_back({"ISRU scenario has no lunar_surface node", "", "", -1});
    }
    for (const auto& a : cfg.network_arcs) {
        if (node_ids.count(a.from) == 0 || node_ids.count(a.to) == 0) {
            out.push_back({"arc endpoint references unknown node", "", a.from + "->" + a.to, -1});
        }
        if (a.time_of_flight < 0) {
            out.push_back({"negative time of flight", "", a.from + "->" + a.to, -1});
        }
    }
    for (const auto& [leg, dv] : cfg.delta_v.legs) {
        (void)dv;
        if (node_ids.count(leg.first) == 0 || node_ids.count(leg.second) == 0) {
            out.push_back({"delta-v leg references unknown node", "", leg.first + "->" + leg.second, -1});
        }
    }
    if (cfg.disposal_open.has_value()) {
        for (int t : *cfg.disposal_open) {
            if (t < 0 || t > cfg.horizon_years) {
                out.push_back({"disposal window opens a timestep outside the horizon", "", "", t});
            }
        }
    }
    return out;
}

}  // namespace lunaflow
