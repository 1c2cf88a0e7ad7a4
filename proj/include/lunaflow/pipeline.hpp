#pragma once

#include <string>
#include <vector>

#include "lunaflow/compile.hpp"
#include "lunaflow/lp/branch_bound.hpp"
#include "lunaflow/plan.hpp"
#include "lunaflow/replay.hpp"
#include "lunaflow/scenario/build.hpp"
#include "lunaflow/scenario/config.hpp"

namespace lunaflow {

/// Everything produced by one end-to-end solve: the compiled program, the
/// optimizer's solution, the derived plan report, and the independent
/// replay verdict.
struct SolveOutcome {
    ScenarioConfig config;
    BuildResult build;
    lp::MilpProblem problem;
    lp::Solution solution;
    PlanReport plan;
    ReplayResult replay_result;
    std::vector<Diagnostic> diagnostics;

    bool optimal() const { return solution.status == lp::SolveStatus::Optimal; }
};

inline SolveOutcome solve_scenario(const ScenarioConfig& cfg) {
    SolveOutcome out;
    out.config = cfg;
    out.diagnostics = validate_scenario(cfg);
    if (!out.diagnostics.empty()) return out;

    out.build = build_scenario(cfg);
    for (const auto& d : out.build.graph.build_diagnostics) out.diagnostics.push_back(d);
    for (const auto& d : validate_graph(out.build.graph)) out.diagnostics.push_back(d);
    if (!out.diagnostics.empty()) return out;

    out.problem = compile(out.build.graph, out.build.demands, out.build.costs);
    out.solution = lp::solve_milp(out.problem);
    out.plan = extract_plan(out.solution, out.build.graph, out.build.costs, out.build.demands);
    if (out.optimal()) {
        out.replay_result = replay(out.solution, out.build.graph, out.build.replay_inputs);
    }
    return out;
}

}  // namespace lunaflow
