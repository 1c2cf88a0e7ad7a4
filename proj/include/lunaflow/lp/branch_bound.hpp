#pragma once

#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "lunaflow/lp/problem.hpp"
#include "lunaflow/lp/simplex.hpp"

namespace lunaflow::lp {

struct BranchBoundOptions {
    SimplexOptions simplex{};
    double integrality_tol{1e-6};
    long max_nodes{200000};
};

/// Best-first branch and bound over the fractional integer variables.
/// Branching picks the most-fractional variable; ties and node ordering
/// break by lowest index / insertion order, so identical inputs explore
/// identical trees.
inline Solution solve_milp(const MilpProblem& problem, BranchBoundOptions opts = {}) {
    Solution root = solve_lp(problem, opts.simplex);
    root.nodes_explored = 1;
    if (root.status != SolveStatus::Optimal) return root;
    double root_bound = root.objective_value;

    if (!problem.has_integer_vars()) {
        root.lp_relaxation_bound = root_bound;
        return root;
    }

    struct NodeData {
        std::vector<double> lower, upper;
        double bound;
        long seq;
    };
    struct Order {
        bool operator()(const NodeData& a, const NodeData& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
            return a.seq > b.seq;
        }
    };

    auto most_fractional = [&](const std::vector<double>& x) -> std::size_t {
        std::size_t pick = problem.num_vars;
        double best_dist = opts.integrality_tol;
        for (std::size_t j = 0; j < problem.num_vars; ++j) {
            if (!problem.is_integer[j]) continue;
            double frac = x[j] - std::floor(x[j]);
            double dist = std::min(frac, 1.0 - frac);
            if (dist > best_dist + 1e-15) {
                // distance from integrality; most fractional = closest to 0.5
                best_dist = dist;
                pick = j;
            }
        }
        return pick;
    };

    std::priority_queue<NodeData, std::vector<NodeData>, Order> open;
    long seq = 0;
    open.push(NodeData{problem.lower, problem.upper, root_bound, seq++});

    Solution incumbent;
    incumbent.status = SolveStatus::Infeasible;
    bool have_incumbent = false;
    long nodes = 0;
    bool node_limit_hit = false;
    double best_open_bound = root_bound;

    MilpProblem scratch = problem;
    while (!open.empty()) {
        NodeData node = open.top();
        open.pop();
        best_open_bound = node.bound;
        if (have_incumbent && node.bound >= incumbent.objective_value - 1e-9) break;
        if (++nodes > opts.max_nodes) { node_limit_hit = true; break; }

        scratch.lower = node.lower;
        scratch.upper = node.upper;
        Solution rel = solve_lp(scratch, opts.simplex);
        if (rel.status == SolveStatus::NumericalBreakdown) {
            rel.nodes_explored = nodes;
            return rel;
        }
        if (rel.status != SolveStatus::Optimal) continue;  // pruned by infeasibility
        if (have_incumbent && rel.objective_value >= incumbent.objective_value - 1e-9) continue;

        std::size_t branch_var = most_fractional(rel.x);
        if (branch_var == problem.num_vars) {
            // Integral within tolerance: round exactly and accept.
            for (std::size_t j = 0; j < problem.num_vars; ++j) {
                if (problem.is_integer[j]) rel.x[j] = std::round(rel.x[j]);
            }
            rel.objective_value = 0.0;
            for (std::size_t j = 0; j < problem.num_vars; ++j) {
                rel.objective_value += problem.objective[j] * rel.x[j];
            }
            if (!have_incumbent || rel.objective_value < incumbent.objective_value - 1e-9) {
                incumbent = rel;
                have_incumbent = true;
            }
            continue;
        }

        double v = rel.x[branch_var];
        NodeData down{node.lower, node.upper, rel.objective_value, seq++};
        down.upper[branch_var] = std::floor(v);
        if (down.upper[branch_var] >= down.lower[branch_var]) open.push(std::move(down));
        NodeData up{node.lower, node.upper, rel.objective_value, seq++};
        up.lower[branch_var] = std::ceil(v);
        if (up.upper[branch_var] >= up.lower[branch_var]) open.push(std::move(up));
    }

    if (have_incumbent) {
        incumbent.status = node_limit_hit ? SolveStatus::NodeLimit : SolveStatus::Optimal;
        if (node_limit_hit) {
            incumbent.detail = "node limit reached; bound gap " +
                               std::to_string(incumbent.objective_value - best_open_bound);
        }
        incumbent.lp_relaxation_bound = root_bound;
        incumbent.nodes_explored = nodes;
        return incumbent;
    }
    Solution none;
    none.status = node_limit_hit ? SolveStatus::NodeLimit : SolveStatus::Infeasible;
    none.lp_relaxation_bound = root_bound;
    none.nodes_explored = nodes;
    if (node_limit_hit) none.detail = "node limit reached with no incumbent";
    return none;
}

}  // namespace lunaflow::lp
