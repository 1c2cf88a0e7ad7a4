#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "lunaflow/compile.hpp"
#include "lunaflow/lp/problem.hpp"
#include "lunaflow/network.hpp"
#include "lunaflow/transform.hpp"

namespace lunaflow {

/// Stock carried out of each (node, commodity, timestep). For the
/// disposal sink the cells are cumulative absorbed mass instead, since
/// nothing leaves it.
using LedgerMap = std::map<std::tuple<std::string, std::string, int>, double>;

struct FlowRecord {
    std::string arc;
    int departure{0};
    std::string commodity;
    double value{0.0};
};

struct PlanReport {
    lp::SolveStatus status{lp::SolveStatus::Infeasible};
    double objective{0.0};
    double lp_relaxation_bound{0.0};
    long iterations{0};
    long nodes_explored{0};
    std::map<std::string, double> cost_breakdown;   // class -> currency
    LedgerMap ledger;
    std::map<std::string, double> byproducts;       // sink totals at horizon end
    std::map<std::string, double> metal_split;      // reporting-only subspecies
    std::vector<FlowRecord> flows;                  // nonzero flows
};

inline double clamp_flow(double v) { return v < 0.0 ? (v > -1e-9 ? 0.0 : v) : v; }

/// Derives ledgers, byproduct totals and the cost decomposition from an
/// optimal solution. This is the solver-side account: arrivals are priced
/// through each arc's compiled transformation matrix.
inline PlanReport extract_plan(const lp::Solution& sol, const TimeExpandedGraph& g,
                               const CostTable& costs, const DemandMap& demands) {
    PlanReport rep;
    rep.status = sol.status;
    rep.objective = sol.objective_value;
    rep.lp_relaxation_bound = sol.lp_relaxation_bound;
    rep.iterations = sol.iterations;
    rep.nodes_explored = sol.nodes_explored;
    if (sol.status != lp::SolveStatus::Optimal && sol.status != lp::SolveStatus::NodeLimit) {
        return rep;
    }

    const std::size_t ncomm = g.registry.size();
    auto flow = [&](std::size_t inst, std::size_t c) {
        return clamp_flow(sol.x[flow_var_index(g, inst, c)]);
    };

    for (const auto& cls : {CostClass::Launch, CostClass::Propellant, CostClass::Hardware,
                            CostClass::Operations, CostClass::Other}) {
        rep.cost_breakdown[std::string(to_string(cls))] = 0.0;
    }
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        const ArcInstance& inst = g.instances[a];
        for (std::size_t c = 0; c < ncomm; ++c) {
            double v = flow(a, c);
            if (v == 0.0) continue;
            const std::string& cid = g.registry.at(c).id;
            std::string label = g.specs[inst.spec].from + "->" + g.specs[inst.spec].to;
            if (g.is_holdover(inst)) label += " (hold)";
            rep.flows.push_back(FlowRecord{label, inst.departure, cid, v});
            for (const auto& item : costs.per_spec[inst.spec]) {
                if (item.commodity == cid) {
                    rep.cost_breakdown[std::string(to_string(item.cls))] += item.per_unit * v;
                }
            }
        }
    }

    const int last = g.horizon.back();
    for (const auto& node : g.nodes) {
        const bool sink = node.kind == NodeKind::Disposal;
        std::vector<double> cumulative(ncomm, 0.0);
        for (int t : g.horizon) {
            std::vector<double> arrivals(ncomm, 0.0), departures(ncomm, 0.0), holdover(ncomm, 0.0);
            for (std::size_t a = 0; a < g.instances.size(); ++a) {
                const ArcInstance& inst = g.instances[a];
                const ArcSpec& spec = g.specs[inst.spec];
                if (spec.to == node.id && inst.arrival == t && !(g.is_holdover(inst) && sink)) {
                    if (spec.transformation) {
                        std::vector<double> out(ncomm);
                        for (std::size_t c = 0; c < ncomm; ++c) out[c] = flow(a, c);
                        std::vector<double> in = spec.transformation->apply(out);
                        for (std::size_t c = 0; c < ncomm; ++c) arrivals[c] += in[c];
                    } else {
                        for (std::size_t c = 0; c < ncomm; ++c) arrivals[c] += flow(a, c);
                    }
                }
                if (spec.from == node.id && inst.departure == t && !g.is_holdover(inst)) {
                    for (std::size_t c = 0; c < ncomm; ++c) departures[c] += flow(a, c);
                }
                if (spec.from == node.id && inst.departure == t && g.is_holdover(inst)) {
                    for (std::size_t c = 0; c < ncomm; ++c) holdover[c] += flow(a, c);
                }
            }
            for (std::size_t c = 0; c < ncomm; ++c) {
                const std::string& cid = g.registry.at(c).id;
                double cell;
                if (sink) {
                    cumulative[c] += arrivals[c];
                    cell = cumulative[c];
                } else if (t < last) {
                    cell = holdover[c];
                } else {
                    double d = demands.get(node.id, cid, t);
                    // Supply cells are sources; report no terminal stock there.
                    cell = d < 0.0 ? 0.0 : arrivals[c] - departures[c] - d;
                    // The holdover arriving from t-1 is already in arrivals.
                    if (std::abs(cell) < 1e-9) cell = 0.0;
                }
                rep.ledger[{node.id, cid, t}] = cell;
            }
        }
        if (sink) {
            for (const char* byp : {"slag", "metals", "emissions", "dsoil"}) {
                rep.byproducts[byp] += cumulative[g.registry.index_of(byp)];
            }
        }
    }

    // Reporting-only split of aggregate metals into subspecies.
    double metals = rep.byproducts.count("metals") ? rep.byproducts["metals"] : 0.0;
    double total_rate = 0.0;
    for (const auto& [name, rate] : mre_metal_split_rates()) total_rate += rate;
    for (const auto& [name, rate] : mre_metal_split_rates()) {
        rep.metal_split[name] = total_rate > 0.0 ? metals * rate / total_rate : 0.0;
    }
    return rep;
}

}  // namespace lunaflow
