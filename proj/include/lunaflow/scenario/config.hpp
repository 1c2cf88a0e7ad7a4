#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lunaflow/network.hpp"
#include "lunaflow/transform.hpp"

namespace lunaflow {

struct CostAssumptions {
    double launch_per_kg{5000.0};
    double lh2_per_kg{5.97};
    double lo2_per_kg{0.15};
    double spacecraft_manufacturing{150e6};
    double spacecraft_operation_per_flight{0.5e6};
    double mixture_ratio{6.0};  // LO2:LH2 by mass
};

struct DemandAssumptions {
    double o2_per_year_kg{10000.0};
    double h2o_per_year_kg{5000.0};
};

struct NodeDecl {
    std::string id;
    NodeKind kind{NodeKind::Earth};
};

struct ArcDecl {
    std::string from;
    std::string to;
    ArcKind kind{ArcKind::Transport};
    int time_of_flight{0};
};

/// One sensitivity sweep: re-solve the scenario at each parameter value.
struct SweepSpec {
    std::string name;
    std::string parameter;        // launch_cost | productivity_multiplier
    std::vector<double> values;   // strictly increasing
    std::optional<bool> isru_override;
};

/// Declarative description of one mission study. Defaults reproduce the
/// baseline assumptions (Table-3 style values, four-node cislunar network
/// plus a surface disposal sink, three-year horizon).
struct ScenarioConfig {
    std::string name{"baseline"};
    int horizon_years{3};
    bool isru_enabled{true};
    CostAssumptions costs;
    PropulsionSpec propulsion;
    DemandAssumptions demands;
    double maintenance_rate_per_year{0.05};
    double productivity_multiplier{1.0};  // scales the annual demands
    ComponentRateSet component_rates{baseline_component_rates()};
    DeltaVTable delta_v;
    std::vector<NodeDecl> network_nodes;
    std::vector<ArcDecl> network_arcs;
    /// Timesteps during which byproduct disposal arcs are open;
    /// nullopt = every timestep.
    std::optional<std::set<int>> disposal_open;
    std::map<std::string, SweepSpec> sweeps;

    ScenarioConfig() {
        delta_v.set("leo", "ls", 5870.0);
        network_nodes = {{"earth", NodeKind::Earth},
                         {"leo", NodeKind::Leo},
                         {"ls", NodeKind::LunarSurface},
                         {"hb", NodeKind::Habitat},
                         {"sink", NodeKind::Disposal}};
        network_arcs = {{"earth", "leo", ArcKind::Transport, 0},
                        {"leo", "ls", ArcKind::Transport, 0},
                        {"ls", "hb", ArcKind::Transport, 0},
                        {"ls", "sink", ArcKind::Transport, 0},
                        {"ls", "ls", ArcKind::Transformation, 1}};
    }

    double effective_o2_per_year() const { return demands.o2_per_year_kg * productivity_multiplier; }
    double effective_h2o_per_year() const { return demands.h2o_per_year_kg * productivity_multiplier; }
};

}  // namespace lunaflow
