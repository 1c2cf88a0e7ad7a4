#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lunaflow/compile.hpp"
#include "lunaflow/lp/problem.hpp"
#include "lunaflow/network.hpp"
#include "lunaflow/plan.hpp"
#include "lunaflow/transform.hpp"

namespace lunaflow {

/// Everything the forward simulator needs to re-derive arc effects from
/// first principles: component rate tables for transformation arcs and the
/// rocket equation for propulsive legs.
struct ReplayInputs {
    ComponentRateSet rates;
    PropulsionSpec propulsion;
    DeltaVTable dv;
    double mixture_ratio{6.0};
    double timestep_years{1.0};
};

struct ReplayViolation {
    std::string message;
    std::string node;
    std::string commodity;
    int timestep{-1};

    std::string format() const {
        std::ostringstream os;
        os << message;
        if (!node.empty()) os << " at " << node;
        if (!commodity.empty()) os << "/" << commodity;
        if (timestep >= 0) os << " t=" << timestep;
        return os.str();
    }
};

struct ReplayResult {
    bool pass{false};
    std::vector<ReplayViolation> violations;
    LedgerMap ledger;                                  // carried stock per cell
    std::map<std::pair<std::string, int>, double> power_generated;  // (node, t) -> kW
    std::map<std::pair<std::string, int>, double> power_consumed;

    const ReplayViolation* first_violation() const {
        return violations.empty() ? nullptr : &violations.front();
    }
};

/// Replays a solved plan timestep by timestep without consulting the LP:
/// arrivals on transformation arcs come straight from the component rate
/// tables, propulsive burns from the rocket equation. Certifies that
/// stocks never go negative, every demand is met, surface power
/// consumption never exceeds generation, concurrency bounds hold, and
/// window-closed flows are exactly zero.
inline ReplayResult replay(const lp::Solution& sol, const TimeExpandedGraph& g,
                           const ReplayInputs& in) {
    ReplayResult res;
    const std::size_t ncomm = g.registry.size();
    const double mass_tol = 1e-6;
    auto flow = [&](std::size_t inst, std::size_t c) {
        return sol.x[flow_var_index(g, inst, c)];
    };

    // Recompute every arc's arrival vector from first principles.
    std::vector<std::vector<double>> arrive(g.instances.size());
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        const ArcInstance& inst = g.instances[a];
        const ArcSpec& spec = g.specs[inst.spec];
        std::vector<double> out(ncomm);
        for (std::size_t c = 0; c < ncomm; ++c) out[c] = flow(a, c);
        std::vector<double> arr = out;

        if (spec.kind == ArcKind::Transformation) {
            for (const auto& [name, r] : in.rates) {
                if (!g.registry.contains(name)) continue;
                double plant = out[g.registry.index_of(name)];
                if (plant == 0.0) continue;
                for (const auto& [cid, alpha] : r.products) {
                    arr[g.registry.index_of(cid)] += alpha * plant * in.timestep_years;
                }
                for (const auto& [cid, beta] : r.consumptions) {
                    arr[g.registry.index_of(cid)] -= beta * plant * in.timestep_years;
                }
                double p = r.power_kw_per_kg * plant * in.timestep_years;
                arr[g.registry.index_of("power")] += p;
                auto key = std::make_pair(spec.to, inst.arrival);
                if (p >= 0.0) res.power_generated[key] += p;
                else res.power_consumed[key] += -p;
            }
        } else if (spec.kind == ArcKind::Transport) {
            double dv = in.dv.get(spec.from, spec.to);
            if (dv > 0.0) {
                double departing_mass = 0.0;
                for (std::size_t c = 0; c < ncomm; ++c) {
                    departing_mass += g.registry.at(c).mass_per_unit * out[c];
                }
                double final_mass = departing_mass * std::exp(-dv / in.propulsion.exhaust_velocity());
                double burn = departing_mass - final_mass;
                PropellantMix mix = propellant_mix(in.mixture_ratio);
                arr[g.registry.index_of("O2")] -= mix.o2_fraction * burn;
                arr[g.registry.index_of("H2")] -= mix.h2_fraction * burn;
                for (const char* gas : {"O2", "H2"}) {
                    double v = arr[g.registry.index_of(gas)];
                    if (v < -mass_tol) {
                        res.violations.push_back({"propulsive leg arrives with negative " +
                                                      std::string(gas) + " (insufficient propellant)",
                                                  spec.to, gas, inst.arrival});
                    }
                }
            }
        }
        arrive[a] = std::move(arr);
    }

    // Window closures: flows outside an open window must be exactly zero.
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        const ArcInstance& inst = g.instances[a];
        const ArcSpec& spec = g.specs[inst.spec];
        for (std::size_t c = 0; c < ncomm; ++c) {
            const std::string& cid = g.registry.at(c).id;
            if (!spec.commodity_open_at(cid, inst.departure) && flow(a, c) != 0.0) {
                res.violations.push_back({"flow outside its time window on " + spec.from + "->" +
                                              spec.to, spec.from, cid, inst.departure});
            }
        }
    }

    // Concurrency rows re-evaluated against the raw flows.
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        const ArcInstance& inst = g.instances[a];
        const ArcSpec& spec = g.specs[inst.spec];
        for (const auto& row : spec.concurrency_rows) {
            double lhs = 0.0;
            double scale = 1.0;
            for (const auto& [cid, coef] : row.coefficients) {
                double term = coef * flow(a, g.registry.index_of(cid));
                lhs += term;
                scale = std::max(scale, std::abs(term));
            }
            if (lhs > row.bound + mass_tol * scale) {
                res.violations.push_back({"concurrency bound violated (" + row.description + ")",
                                          spec.from, "", inst.departure});
            }
        }
    }

    // Integer flows must be integral.
    for (std::size_t a = 0; a < g.instances.size(); ++a) {
        for (std::size_t c = 0; c < ncomm; ++c) {
            if (g.registry.at(c).kind != FlowKind::Discrete) continue;
            double v = flow(a, c);
            if (std::abs(v - std::round(v)) > 1e-6) {
                res.violations.push_back({"discrete flow is fractional",
                                          g.specs[g.instances[a].spec].from, g.registry.at(c).id,
                                          g.instances[a].departure});
            }
        }
    }

    // Per-node stock recursion. The carried stock must match the plan's
    // holdover flow and never go negative; at the final step nothing may
    // remain stranded outside the disposal sink.
    const int last = g.horizon.back();
    for (const auto& node : g.nodes) {
        const bool sink = node.kind == NodeKind::Disposal;
        std::vector<double> carried(ncomm, 0.0), cumulative(ncomm, 0.0);
        for (int t : g.horizon) {
            std::vector<double> inflow(ncomm, 0.0), outflow(ncomm, 0.0), holdover_out(ncomm, 0.0);
            for (std::size_t a = 0; a < g.instances.size(); ++a) {
                const ArcInstance& inst = g.instances[a];
                const ArcSpec& spec = g.specs[inst.spec];
                bool hold = g.is_holdover(inst);
                if (spec.to == node.id && inst.arrival == t && !hold) {
                    for (std::size_t c = 0; c < ncomm; ++c) inflow[c] += arrive[a][c];
                }
                if (spec.from == node.id && inst.departure == t) {
                    for (std::size_t c = 0; c < ncomm; ++c) {
                        (hold ? holdover_out : outflow)[c] += flow(a, c);
                    }
                }
            }
            for (std::size_t c = 0; c < ncomm; ++c) {
                const std::string& cid = g.registry.at(c).id;
                if (sink) {
                    cumulative[c] += inflow[c];
                    res.ledger[{node.id, cid, t}] = cumulative[c];
                    continue;
                }
                double d = node.demand_schedule.count({cid, t})
                               ? node.demand_schedule.at({cid, t})
                               : 0.0;
                double scale = 1.0 + std::abs(inflow[c]) + std::abs(outflow[c]) + std::abs(d) +
                               std::abs(carried[c]);
                if (d < 0.0) {
                    // Supply cell: the node may draw up to |d| from outside.
                    double need = outflow[c] + holdover_out[c] - carried[c] - inflow[c];
                    if (!std::isinf(d) && need > -d + mass_tol * scale) {
                        res.violations.push_back({"draw exceeds available supply", node.id, cid, t});
                    }
                    res.ledger[{node.id, cid, t}] = holdover_out[c];
                    carried[c] = holdover_out[c];
                    continue;
                }
                double stock = carried[c] + inflow[c] - outflow[c] - d;
                if (stock < -mass_tol * scale) {
                    std::string what = d > 0.0 ? "demand unmet (stock would go negative)"
                                               : "stock goes negative";
                    res.violations.push_back({what, node.id, cid, t});
                }
                if (t < last) {
                    if (std::abs(stock - holdover_out[c]) > mass_tol * scale) {
                        res.violations.push_back({"mass balance residual exceeds tolerance",
                                                  node.id, cid, t});
                    }
                    res.ledger[{node.id, cid, t}] = stock;
                    carried[c] = holdover_out[c];  // follow the plan into the next step
                } else {
                    if (std::abs(stock) > mass_tol * scale) {
                        res.violations.push_back({"stock stranded at end of horizon", node.id, cid, t});
                    }
                    res.ledger[{node.id, cid, t}] = stock;
                }
            }
        }
    }

    // Surface power balance: consumption <= generation at every step.
    for (const auto& [key, used] : res.power_consumed) {
        double gen = res.power_generated.count(key) ? res.power_generated.at(key) : 0.0;
        if (used > gen + 1e-6 * (1.0 + gen)) {
            res.violations.push_back({"power consumption exceeds generation", key.first, "power",
                                      key.second});
        }
    }

    res.pass = res.violations.empty();
    return res;
}

/// Horizon-end totals absorbed by the disposal sink.
struct ByproductTotals {
    double slag{0.0};
    double metals{0.0};
    double emissions{0.0};
    double dsoil_surplus{0.0};
};

inline ByproductTotals byproduct_totals(const LedgerMap& ledger, const TimeExpandedGraph& g) {
    ByproductTotals t;
    const int last = g.horizon.back();
    for (const auto& node : g.nodes) {
        if (node.kind != NodeKind::Disposal) continue;
        auto cell = [&](const char* cid) {
            auto it = ledger.find({node.id, cid, last});
            return it == ledger.end() ? 0.0 : it->second;
        };
        t.slag += cell("slag");
        t.metals += cell("metals");
        t.emissions += cell("emissions");
        t.dsoil_surplus += cell("dsoil");
    }
    return t;
}

}  // namespace lunaflow
