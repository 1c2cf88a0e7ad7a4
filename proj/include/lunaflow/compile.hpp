#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "lunaflow/lp/problem.hpp"
#include "lunaflow/network.hpp"

namespace lunaflow {

/// Exogenous terms keyed by (node, commodity, timestep). Positive values
/// are demands that must be met exactly; negative values are supply
/// availability (up to |value| may be drawn; -inf marks an unbounded
/// source and drops the balance row entirely).
struct DemandMap {
    std::map<std::tuple<std::string, std::string, int>, double> entries;

    void set(const std::string& node, const std::string& commodity, int t, double value) {
        entries[{node, commodity, t}] = value;
    }
    double get(const std::string& node, const std::string& commodity, int t) const {
        auto it = entries.find({node, commodity, t});
        return it == entries.end() ? 0.0 : it->second;
    }
};

/// Collects the per-node demand schedules into one map.
inline DemandMap collect_demands(const TimeExpandedGraph& g) {
    DemandMap d;
    for (const auto& n : g.nodes) {
        for (const auto& [key, value] : n.demand_schedule) {
            d.set(n.id, key.first, key.second, value);
        }
    }
    return d;
}

/// Objective cost coefficients per arc spec, harvested from the specs'
/// cost items. Kept separate so studies can re-price without rebuilding
/// the network.
struct CostTable {
    std::vector<std::vector<CostItem>> per_spec;

    static CostTable from_graph(const TimeExpandedGraph& g) {
        CostTable t;
        t.per_spec.reserve(g.specs.size());
        for (const auto& s : g.specs) t.per_spec.push_back(s.cost_items);
        return t;
    }

    double coefficient(std::size_t spec, const std::string& commodity) const {
        double c = 0.0;
        for (const auto& item : per_spec[spec]) {
            if (item.commodity == commodity) c += item.per_unit;
        }
        return c;
    }
};

inline std::size_t flow_var_index(const TimeExpandedGraph& g, std::size_t instance,
                                  std::size_t commodity) {
    return instance * g.registry.size() + commodity;
}

/// Compiles the time-expanded graph into the mission MILP:
/// one flow variable per (arc instance, commodity); a mass-balance row
/// per (node, timestep, commodity) with outflow minus transformed inflow
/// pinned to the exogenous term; a concurrency row per arc instance and
/// declared coupling; and window-closed variables fixed to zero.
inline lp::MilpProblem compile(const TimeExpandedGraph& g, const DemandMap& demands,
                               const CostTable& costs) {
    const std::size_t ncomm = g.registry.size();
    lp::MilpProblem p;

    for (const auto& key_value : demands.entries) {
        const auto& [node, commodity, t] = key_value.first;
        if (!g.has_node(node)) throw std::invalid_argument("compile: demand at unknown node " + node);
        if (!g.registry.contains(commodity)) {
            throw std::invalid_argument("compile: demand for unknown commodity " + commodity);
        }
        bool in_horizon = false;
        for (int h : g.horizon) in_horizon |= (h == t);
        if (!in_horizon) {
            throw std::invalid_argument("compile: demand at timestep outside horizon (node " + node +
                                        ", t=" + std::to_string(t) + ")");
        }
    }
    for (const auto& s : g.specs) {
        if (s.transformation && s.transformation->size() != ncomm) {
            throw std::invalid_argument("compile: transformation matrix dimension mismatch on arc " +
                                        s.from + "->" + s.to);
        }
    }

    // Variables, ordered by (instance, commodity).
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        const ArcInstance& inst = g.instances[a];
        const ArcSpec& spec = g.specs[inst.spec];
        for (std::size_t c = 0; c < ncomm; ++c) {
            const Commodity& com = g.registry.at(c);
            double cost = costs.coefficient(inst.spec, com.id);
            std::size_t j = p.add_variable(com.id + "[" + g.instance_label(inst) + "]", 0.0, lp::kInf,
                                           com.kind == FlowKind::Discrete, cost);
            if (!spec.commodity_open_at(com.id, inst.departure)) {
                p.upper[j] = 0.0;
                p.window_fixed.push_back(j);
            }
        }
    }

    // Mass balance per (node, timestep, commodity).
    for (const auto& node : g.nodes) {
        if (node.kind == NodeKind::Disposal) continue;  // absorbing sink
        for (int t : g.horizon) {
            for (std::size_t c = 0; c < ncomm; ++c) {
                const std::string& cid = g.registry.at(c).id;
                double d = demands.get(node.id, cid, t);
                lp::RowKind kind = lp::RowKind::Equal;
                double rhs = -d;                      // demand d consumed at the node
                if (d < 0.0) {
                    if (std::isinf(d)) continue;      // unbounded source: no row
                    kind = lp::RowKind::LessEqual;    // draw up to the available supply
                    rhs = -d;
                }

                std::vector<std::pair<std::size_t, double>> terms;
                for (std::size_t a = 0; a < g.instances.size(); ++a) {
                    const ArcInstance& inst = g.instances[a];
                    const ArcSpec& spec = g.specs[inst.spec];
                    if (spec.from == node.id && inst.departure == t) {
                        terms.emplace_back(flow_var_index(g, a, c), 1.0);
                    }
                    if (spec.to == node.id && inst.arrival == t) {
                        if (spec.transformation) {
                            for (std::size_t j = 0; j < ncomm; ++j) {
                                double q = (*spec.transformation)(c, j);
                                if (q != 0.0) terms.emplace_back(flow_var_index(g, a, j), -q);
                            }
                        } else {
                            terms.emplace_back(flow_var_index(g, a, c), -1.0);
                        }
                    }
                }
                if (terms.empty() && rhs == 0.0) continue;
                lp::Row& row = p.add_row(kind, rhs, "balance:" + node.id + ":" + cid + ":t" +
                                                        std::to_string(t));
                for (const auto& [j, v] : terms) row.coef[j] += v;
            }
        }
    }

    // Concurrency rows per arc instance.
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        const ArcInstance& inst = g.instances[a];
        const ArcSpec& spec = g.specs[inst.spec];
        for (std::size_t r = 0; r < spec.concurrency_rows.size(); ++r) {
            const ConcurrencyRow& cr = spec.concurrency_rows[r];
            lp::Row& row = p.add_row(lp::RowKind::LessEqual, cr.bound,
                                     "concurrency:" + g.instance_label(inst) + ":" +
                                         (cr.description.empty() ? std::to_string(r) : cr.description));
            for (const auto& [cid, coef] : cr.coefficients) {
                row.coef[flow_var_index(g, a, g.registry.index_of(cid))] += coef;
            }
        }
    }
    return p;
}

}  // namespace lunaflow
