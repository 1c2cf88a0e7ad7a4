#pragma once

#include <string>
#include <thread>
#include <vector>

#include "lunaflow/pipeline.hpp"
#include "lunaflow/replay.hpp"
#include "lunaflow/scenario/config.hpp"

namespace lunaflow {

struct SweepRow {
    double value{0.0};
    bool ok{false};
    std::string error;   // status text when the solve failed
    double total_cost{0.0};
    double slag_kg{0.0};
    double metals_kg{0.0};
    double emissions_kg{0.0};
};

struct SweepTable {
    std::string parameter;
    std::vector<SweepRow> rows;
};

inline ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const SweepSpec& spec, double value) {
    if (spec.isru_override.has_value()) cfg.isru_enabled = *spec.isru_override;
    if (spec.parameter == "launch_cost") cfg.costs.launch_per_kg = value;
    else if (spec.parameter == "productivity_multiplier") cfg.productivity_multiplier = value;
    else throw std::invalid_argument("unknown sweep parameter: " + spec.parameter);
    return cfg;
}

/// Solves the scenario once per sweep value. Rows are independent, so they
/// may run on worker threads; the table is always ordered by input value.
/// A failed row is annotated and the sweep continues.
inline SweepTable run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int jobs = 1) {
    if (spec.values.empty()) throw std::invalid_argument("sweep has no values");
    SweepTable table;
    table.parameter = spec.parameter;
    table.rows.resize(spec.values.size());

    auto solve_row = [&](std::size_t i) {
        SweepRow& row = table.rows[i];
        row.value = spec.values[i];
        try {
            SolveOutcome outcome = solve_scenario(apply_sweep_value(base, spec, spec.values[i]));
            if (!outcome.diagnostics.empty()) {
                row.error = "validation: " + outcome.diagnostics.front().format();
                return;
            }
            if (!outcome.optimal()) {
                row.error = lp::to_string(outcome.solution.status);
                return;
            }
            if (!outcome.replay_result.pass) {
                row.error = "replay: " + outcome.replay_result.first_violation()->format();
                return;
            }
            ByproductTotals b = byproduct_totals(outcome.replay_result.ledger, outcome.build.graph);
            row.ok = true;
            row.total_cost = outcome.plan.objective;
            row.slag_kg = b.slag;
            row.metals_kg = b.metals;
            row.emissions_kg = b.emissions;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < spec.values.size(); ++i) solve_row(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs && w < static_cast<int>(spec.values.size()); ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t i = static_cast<std::size_t>(w); i < spec.values.size();
                     i += static_cast<std::size_t>(jobs)) {
                    solve_row(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return table;
}

}  // namespace lunaflow
