#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lunaflow/pipeline.hpp"
#include "lunaflow/scenario/sweep.hpp"

namespace lunaflow {

/// Fixed number formatting so repeated runs emit byte-identical files.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline nlohmann::ordered_json report_json(const SolveOutcome& o) {
    nlohmann::ordered_json j;
    j["scenario"] = o.config.name;
    j["isru_enabled"] = o.config.isru_enabled;
    j["horizon_years"] = o.config.horizon_years;
    j["status"] = lp::to_string(o.solution.status);
    if (!o.diagnostics.empty()) {
        auto& diags = j["diagnostics"] = nlohmann::ordered_json::array();
        for (const auto& d : o.diagnostics) diags.push_back(d.format());
        return j;
    }
    j["objective"] = o.plan.objective;
    j["lp_relaxation_bound"] = o.plan.lp_relaxation_bound;
    j["cost_breakdown"] = nlohmann::ordered_json::object();
    for (const auto& [cls, amount] : o.plan.cost_breakdown) j["cost_breakdown"][cls] = amount;

    ByproductTotals b = byproduct_totals(o.plan.ledger, o.build.graph);
    j["byproducts"] = {{"slag_kg", b.slag},
                       {"metals_kg", b.metals},
                       {"emissions_kg", b.emissions},
                       {"dsoil_surplus_kg", b.dsoil_surplus}};
    j["metal_split_kg"] = nlohmann::ordered_json::object();
    for (const auto& [metal, kg] : o.plan.metal_split) j["metal_split_kg"][metal] = kg;

    j["plant_sizing_kg"] = {{"MRE", o.build.sizing.mre},
                            {"SWE", o.build.sizing.swe},
                            {"DWE", o.build.sizing.dwe},
                            {"excavator", o.build.sizing.excavator},
                            {"FSPS", o.build.sizing.fsps},
                            {"power_kw", o.build.sizing.power_kw}};

    j["replay"] = {{"verdict", o.replay_result.pass ? "pass" : "fail"}};
    if (!o.replay_result.pass && o.replay_result.first_violation() != nullptr) {
        j["replay"]["first_violation"] = o.replay_result.first_violation()->format();
    }

    auto& flows = j["flows"] = nlohmann::ordered_json::array();
    for (const auto& f : o.plan.flows) {
        flows.push_back({{"arc", f.arc}, {"t", f.departure}, {"commodity", f.commodity},
                         {"value", f.value}});
    }
    j["solver"] = {{"iterations", o.solution.iterations},
                   {"nodes_explored", o.solution.nodes_explored}};
    return j;
}

/// node,commodity,timestep,stock rows for every ledger cell.
inline std::string ledger_csv(const PlanReport& plan) {
    std::ostringstream os;
    os << "node,commodity,timestep,stock\n";
    for (const auto& [key, value] : plan.ledger) {
        const auto& [node, commodity, t] = key;
        os << node << "," << commodity << "," << t << "," << format_number(value) << "\n";
    }
    return os.str();
}

inline std::string sweep_csv(const SweepTable& table) {
    std::ostringstream os;
    os << "value,total_cost,slag_kg,metals_kg,emissions_kg\n";
    for (const auto& r : table.rows) {
        os << format_number(r.value) << ",";
        if (r.ok) {
            os << format_number(r.total_cost) << "," << format_number(r.slag_kg) << ","
               << format_number(r.metals_kg) << "," << format_number(r.emissions_kg);
        } else {
            os << "error:" << r.error << ",,,";
        }
        os << "\n";
    }
    return os.str();
}

/// Human-readable summary printed by the CLI.
inline std::string summary_text(const SolveOutcome& o) {
    std::ostringstream os;
    os << "scenario " << o.config.name << " (" << (o.config.isru_enabled ? "ISRU" : "Earth-dependent")
       << ", " << o.config.horizon_years << " yr)\n";
    if (!o.diagnostics.empty()) {
        os << "  validation failed:\n";
        for (const auto& d : o.diagnostics) os << "    - " << d.format() << "\n";
        return os.str();
    }
    os << "  status            " << lp::to_string(o.solution.status) << "\n";
    if (!o.optimal()) return os.str();
    os << "  total cost        $" << format_number(o.plan.objective / 1e6) << " M\n";
    for (const auto& [cls, amount] : o.plan.cost_breakdown) {
        if (amount != 0.0) os << "    " << cls << std::string(16 - cls.size(), ' ')
                              << "$" << format_number(amount / 1e6) << " M\n";
    }
    ByproductTotals b = byproduct_totals(o.plan.ledger, o.build.graph);
    os << "  slag              " << format_number(b.slag) << " kg\n";
    os << "  metals            " << format_number(b.metals) << " kg\n";
    os << "  emissions         " << format_number(b.emissions) << " kg\n";
    os << "  dsoil surplus     " << format_number(b.dsoil_surplus) << " kg\n";
    os << "  replay            " << (o.replay_result.pass ? "pass" : "FAIL") << "\n";
    if (!o.replay_result.pass && o.replay_result.first_violation() != nullptr) {
        os << "    first violation: " << o.replay_result.first_violation()->format() << "\n";
    }
    return os.str();
}

}  // namespace lunaflow
