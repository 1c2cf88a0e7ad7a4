#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lunaflow/commodity.hpp"

namespace lunaflow {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class NodeKind { Earth, Leo, LunarSurface, Habitat, Disposal };

inline std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Earth: return "earth";
        case NodeKind::Leo: return "leo";
        case NodeKind::LunarSurface: return "lunar_surface";
        case NodeKind::Habitat: return "habitat";
        case NodeKind::Disposal: return "disposal";
    }
    return "?";
}

/// A location in the static network. The demand schedule maps
/// (commodity, timestep) to signed mass: positive entries are demands that
/// must be met exactly at that step, negative entries are supply made
/// available there (use -infinity for an unbounded source such as Earth
/// stock of purchasable goods).
struct Node {
    std::string id;
    NodeKind kind{NodeKind::Earth};
    std::map<std::pair<std::string, int>, double> demand_schedule;

    void set_demand(const std::string& commodity, int t, double amount) {
        demand_schedule[{commodity, t}] = amount;
    }
    void set_supply(const std::string& commodity, int t, double amount) {
        demand_schedule[{commodity, t}] = -amount;
    }
};

enum class ArcKind { Transport, Transformation, Holdover };

inline std::string_view to_string(ArcKind k) {
    switch (k) {
        case ArcKind::Transport: return "transport";
        case ArcKind::Transformation: return "transformation";
        case ArcKind::Holdover: return "holdover";
    }
    return "?";
}

/// Cost attribution class, used for the report's cost decomposition.
enum class CostClass { Launch, Propellant, Hardware, Operations, Other };

inline std::string_view to_string(CostClass c) {
    switch (c) {
        case CostClass::Launch: return "launch";
        case CostClass::Propellant: return "propellant";
        case CostClass::Hardware: return "hardware";
        case CostClass::Operations: return "operations";
        case CostClass::Other: return "other";
    }
    return "?";
}

/// One additive term of an arc's per-unit cost coefficient for a commodity.
struct CostItem {
    std::string commodity;
    double per_unit{0.0};
    CostClass cls{CostClass::Other};
};

/// Square matrix mapping an arc's outflow vector to its inflow vector.
/// Defaults to the identity (pure pass-through).
class TransformationMatrix {
public:
    TransformationMatrix() = default;

    explicit TransformationMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
        for (std::size_t i = 0; i < n; ++i) a_[i * n + i] = 1.0;
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t row, std::size_t col) const { return a_[row * n_ + col]; }
    double& operator()(std::size_t row, std::size_t col) { return a_[row * n_ + col]; }

    bool is_identity(double tol = 0.0) const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                double want = i == j ? 1.0 : 0.0;
                if (std::abs(a_[i * n_ + j] - want) > tol) return false;
            }
        }
        return true;
    }

    /// inflow = Q * outflow
    std::vector<double> apply(const std::vector<double>& outflow) const {
        std::vector<double> in(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * outflow[j];
            in[i] = s;
        }
        return in;
    }

private:
    std::size_t n_{0};
    std::vector<double> a_;
};

/// Linear capacity coupling across the commodities of one arc:
/// sum(coefficients * flow) <= bound. Capacity-per-vehicle rows carry a
/// negative coefficient on the vehicle-count commodity and bound 0.
struct ConcurrencyRow {
    std::map<std::string, double> coefficients;
    double bound{0.0};
    std::string description;
};

/// Timesteps during which the listed commodity group may flow on the arc.
/// An empty open set forbids the group on the arc entirely.
struct TimeWindow {
    std::vector<std::string> group;
    std::set<int> open;
};

/// Static arc template. Expansion instantiates it at every feasible
/// departure timestep.
struct ArcSpec {
    std::string from;
    std::string to;
    ArcKind kind{ArcKind::Transport};
    int time_of_flight{0};
    std::vector<CostItem> cost_items;
    std::optional<TransformationMatrix> transformation;  // identity if absent
    std::vector<ConcurrencyRow> concurrency_rows;
    std::vector<TimeWindow> windows;

    /// Objective coefficient for one commodity (sum of its cost items).
    double cost_coefficient(const std::string& commodity) const {
        double c = 0.0;
        for (const auto& item : cost_items) {
            if (item.commodity == commodity) c += item.per_unit;
        }
        return c;
    }

    bool commodity_open_at(const std::string& commodity, int departure) const {
        for (const auto& w : windows) {
            if (std::find(w.group.begin(), w.group.end(), commodity) != w.group.end() &&
                w.open.count(departure) == 0) {
                return false;
            }
        }
        return true;
    }
};

/// One departure of an ArcSpec in the time-expanded network.
struct ArcInstance {
    std::size_t spec;   // index into TimeExpandedGraph::specs
    int departure;
    int arrival;        // departure + time_of_flight
};

struct Diagnostic {
    std::string message;
    std::string node;       // empty when not node-scoped
    std::string arc;        // "from->to" when arc-scoped
    int timestep{-1};       // -1 when not time-scoped

    std::string format() const {
        std::ostringstream os;
        os << message;
        if (!node.empty()) os << " [node " << node << "]";
        if (!arc.empty()) os << " [arc " << arc << "]";
        if (timestep >= 0) os << " [t=" << timestep << "]";
        return os.str();
    }
};

/// The expanded directed network: every arc spec instantiated at each
/// feasible departure, plus one holdover self-arc per node and non-final
/// timestep so stocks can persist. Immutable once built; safe to share
/// across solver workers.
struct TimeExpandedGraph {
    CommodityRegistry registry;
    std::vector<Node> nodes;
    std::vector<int> horizon;            // ordered timesteps
    std::vector<ArcSpec> specs;          // declared arcs, then synthesized holdovers
    std::size_t first_holdover_spec{0};  // specs[i >= this] are holdovers
    std::vector<ArcInstance> instances;
    std::vector<Diagnostic> build_diagnostics;

    std::size_t node_index(std::string_view id) const {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id == id) return i;
        }
        throw std::out_of_range("unknown node id: " + std::string(id));
    }

    bool has_node(std::string_view id) const {
        for (const auto& n : nodes) {
            if (n.id == id) return true;
        }
        return false;
    }

    bool is_holdover(const ArcInstance& inst) const { return inst.spec >= first_holdover_spec; }

    std::string instance_label(const ArcInstance& inst) const {
        const ArcSpec& s = specs[inst.spec];
        std::ostringstream os;
        os << s.from << "->" << s.to << "@" << inst.departure;
        if (is_holdover(inst)) os << " (hold)";
        return os.str();
    }
};

struct ExpandOptions {
    /// Windows attached to every synthesized holdover spec (e.g. to forbid
    /// storing non-storable commodities such as power).
    std::vector<TimeWindow> holdover_windows;
};

/// Builds the time-expanded graph. Arcs whose time of flight can never fit
/// inside the horizon are reported in build_diagnostics, never silently
/// dropped. Throws on unknown node references.
inline TimeExpandedGraph expand(CommodityRegistry registry, std::vector<Node> nodes,
                                std::vector<ArcSpec> arcs, std::vector<int> horizon,
                                ExpandOptions opts = {}) {
    if (horizon.empty()) throw std::invalid_argument("expand: horizon must be nonempty");
    std::sort(horizon.begin(), horizon.end());

    TimeExpandedGraph g;
    g.registry = std::move(registry);
    g.nodes = std::move(nodes);
    g.horizon = std::move(horizon);

    std::set<int> steps(g.horizon.begin(), g.horizon.end());
    const int last = g.horizon.back();

    for (auto& a : arcs) {
        if (!g.has_node(a.from)) throw std::invalid_argument("expand: unknown node id: " + a.from);
        if (!g.has_node(a.to)) throw std::invalid_argument("expand: unknown node id: " + a.to);
        if (a.time_of_flight < 0) {
            throw std::invalid_argument("expand: negative time of flight on " + a.from + "->" + a.to);
        }
    }

    g.specs = std::move(arcs);
    for (std::size_t si = 0; si < g.specs.size(); ++si) {
        const ArcSpec& s = g.specs[si];
        bool any = false;
        for (int t : g.horizon) {
            int arrive = t + s.time_of_flight;
            if (steps.count(arrive) != 0) {
                g.instances.push_back(ArcInstance{si, t, arrive});
                any = true;
            }
        }
        if (!any) {
            g.build_diagnostics.push_back(Diagnostic{
                "arc can never depart: time of flight exceeds horizon span",
                "", s.from + "->" + s.to, -1});
        }
    }

    // Holdover self-arcs: one spec per node, instances at every non-final step.
    g.first_holdover_spec = g.specs.size();
    for (const auto& n : g.nodes) {
        ArcSpec h;
        h.from = n.id;
        h.to = n.id;
        h.kind = ArcKind::Holdover;
        h.time_of_flight = 1;
        h.windows = opts.holdover_windows;
        std::size_t si = g.specs.size();
        g.specs.push_back(std::move(h));
        for (int t : g.horizon) {
            if (t != last && steps.count(t + 1) != 0) {
                g.instances.push_back(ArcInstance{si, t, t + 1});
            }
        }
    }
    return g;
}

/// Checks the structural invariants of a built graph. Returns one
/// diagnostic per violation; an empty list means the graph is well formed.
inline std::vector<Diagnostic> validate_graph(const TimeExpandedGraph& g) {
    std::vector<Diagnostic> out;
    std::set<int> steps(g.horizon.begin(), g.horizon.end());
    const int last = g.horizon.empty() ? 0 : g.horizon.back();

    std::set<std::string> ids;
    for (const auto& n : g.nodes) {
        if (!ids.insert(n.id).second) {
            out.push_back({"duplicate node id", n.id, "", -1});
        }
        for (const auto& [key, value] : n.demand_schedule) {
            const auto& [commodity, t] = key;
            if (!g.registry.contains(commodity)) {
                out.push_back({"demand references unknown commodity '" + commodity + "'", n.id, "", t});
            }
            if (steps.count(t) == 0) {
                out.push_back({"demand at timestep outside horizon", n.id, "", t});
            }
            if (std::isnan(value)) {
                out.push_back({"demand value is NaN", n.id, "", t});
            }
        }
    }

    for (const auto& s : g.specs) {
        const std::string label = s.from + "->" + s.to;
        if (!g.has_node(s.from) || !g.has_node(s.to)) {
            out.push_back({"arc endpoint references unknown node", "", label, -1});
            continue;
        }
        if (s.kind == ArcKind::Holdover && (s.from != s.to || s.time_of_flight != 1)) {
            out.push_back({"holdover arc must be a self-arc with time of flight 1", "", label, -1});
        }
        for (const auto& item : s.cost_items) {
            if (!g.registry.contains(item.commodity)) {
                out.push_back({"cost item references unknown commodity '" + item.commodity + "'", "", label, -1});
            }
            if (item.per_unit < 0.0) {
                out.push_back({"negative cost coefficient for '" + item.commodity + "'", "", label, -1});
            }
        }
        if (s.transformation && s.transformation->size() != g.registry.size()) {
            out.push_back({"transformation matrix dimension mismatch", "", label, -1});
        }
        for (const auto& row : s.concurrency_rows) {
            for (const auto& [commodity, coef] : row.coefficients) {
                (void)coef;
                if (!g.registry.contains(commodity)) {
                    out.push_back({"concurrency row references unknown commodity '" + commodity + "'",
                                   "", label, -1});
                }
            }
        }
        for (const auto& w : s.windows) {
            for (const auto& commodity : w.group) {
                if (!g.registry.contains(commodity)) {
                    out.push_back({"time window references unknown commodity '" + commodity + "'",
                                   "", label, -1});
                }
            }
            for (int t : w.open) {
                if (steps.count(t) == 0) {
                    out.push_back({"time window opens a timestep outside the horizon", "", label, t});
                }
            }
        }
    }

    for (const auto& inst : g.instances) {
        if (steps.count(inst.departure) == 0 || steps.count(inst.arrival) == 0) {
            const ArcSpec& s = g.specs[inst.spec];
            out.push_back({"arc instance outside horizon", "", s.from + "->" + s.to, inst.departure});
        }
    }

    // Holdover completeness: exactly one per node and non-final timestep.
    std::map<std::pair<std::string, int>, int> holds;
    for (const auto& inst : g.instances) {
        if (g.is_holdover(inst)) holds[{g.specs[inst.spec].from, inst.departure}]++;
    }
    for (const auto& n : g.nodes) {
        for (int t : g.horizon) {
            if (t == last) continue;
            int k = holds.count({n.id, t}) ? holds[{n.id, t}] : 0;
            if (k != 1) {
                out.push_back({"expected exactly one holdover arc, found " + std::to_string(k),
                               n.id, "", t});
            }
        }
    }
    return out;
}

}  // namespace lunaflow
