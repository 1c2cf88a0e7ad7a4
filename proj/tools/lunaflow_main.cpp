#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lunaflow/lp/lp_writer.hpp"
#include "lunaflow/pipeline.hpp"
#include "lunaflow/report.hpp"
#include "lunaflow/scenario/parse.hpp"
#include "lunaflow/scenario/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;  // infeasible or failed validation

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::filesystem::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("LUNAFLOW_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return ".";
}

int cmd_solve(const std::string& scenario_path, const std::string& out_flag, bool strict,
              const std::string& format, bool dump_lp) {
    lunaflow::ScenarioConfig cfg;
    try {
        cfg = lunaflow::load_scenario(read_file(scenario_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    lunaflow::SolveOutcome outcome = lunaflow::solve_scenario(cfg);
    std::filesystem::path dir = output_dir(out_flag);
    std::filesystem::create_directories(dir);

    if (dump_lp && outcome.diagnostics.empty()) {
        write_file(dir / (cfg.name + ".lp"), lunaflow::lp::write_lp_text(outcome.problem));
    }
    write_file(dir / (cfg.name + ".report.json"), lunaflow::report_json(outcome).dump(2) + "\n");
    if (outcome.optimal()) {
        write_file(dir / (cfg.name + ".ledger.csv"), lunaflow::ledger_csv(outcome.plan));
    }

    if (format == "csv") {
        lunaflow::ByproductTotals b =
            outcome.optimal()
                ? lunaflow::byproduct_totals(outcome.plan.ledger, outcome.build.graph)
                : lunaflow::ByproductTotals{};
        std::cout << "scenario,status,total_cost,slag_kg,metals_kg,emissions_kg\n"
                  << cfg.name << "," << lunaflow::lp::to_string(outcome.solution.status) << ","
                  << lunaflow::format_number(outcome.plan.objective) << ","
                  << lunaflow::format_number(b.slag) << "," << lunaflow::format_number(b.metals)
                  << "," << lunaflow::format_number(b.emissions) << "\n";
    } else {
        std::cout << lunaflow::summary_text(outcome);
    }

    if (!outcome.diagnostics.empty() || !outcome.optimal()) return kExitFailed;
    if (strict && !outcome.replay_result.pass) return kExitFailed;
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& sweep_name,
              const std::string& out_flag, int jobs) {
    lunaflow::ScenarioConfig cfg;
    try {
        cfg = lunaflow::load_scenario(read_file(scenario_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    auto it = cfg.sweeps.find(sweep_name);
    if (it == cfg.sweeps.end()) {
        std::cerr << "error: scenario defines no sweep named '" << sweep_name << "'\n";
        return kExitUsage;
    }

    lunaflow::SweepTable table = lunaflow::run_sweep(cfg, it->second, jobs);
    std::string csv = lunaflow::sweep_csv(table);
    std::filesystem::path dir = output_dir(out_flag);
    std::filesystem::create_directories(dir);
    write_file(dir / (cfg.name + "." + sweep_name + ".csv"), csv);
    std::cout << csv;

    for (const auto& row : table.rows) {
        if (row.ok) return kExitOk;  // at least one row succeeded
    }
    return kExitFailed;
}

int cmd_validate(const std::string& scenario_path) {
    lunaflow::ScenarioConfig cfg;
    try {
        cfg = lunaflow::load_scenario(read_file(scenario_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::vector<lunaflow::Diagnostic> diags = lunaflow::validate_scenario(cfg);
    if (diags.empty()) {
        try {
            lunaflow::BuildResult build = lunaflow::build_scenario(cfg);
            for (const auto& d : build.graph.build_diagnostics) diags.push_back(d);
            for (const auto& d : lunaflow::validate_graph(build.graph)) diags.push_back(d);
        } catch (const std::exception& e) {
            diags.push_back({std::string("build failed: ") + e.what(), "", "", -1});
        }
    }
    if (diags.empty()) {
        std::cout << "ok: " << cfg.name << " is valid\n";
        return kExitOk;
    }
    for (const auto& d : diags) std::cout << "diagnostic: " << d.format() << "\n";
    return kExitFailed;
}

int cmd_report(const std::string& report_path, const std::string& format) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(report_path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (format == "csv") {
        std::cout << "metric,value\n";
        std::cout << "scenario," << j.value("scenario", std::string("?")) << "\n";
        std::cout << "status," << j.value("status", std::string("?")) << "\n";
        if (j.contains("objective")) {
            std::cout << "total_cost," << lunaflow::format_number(j["objective"].get<double>()) << "\n";
        }
        if (j.contains("cost_breakdown")) {
            for (auto& [k, v] : j["cost_breakdown"].items()) {
                std::cout << "cost." << k << "," << lunaflow::format_number(v.get<double>()) << "\n";
            }
        }
        if (j.contains("byproducts")) {
            for (auto& [k, v] : j["byproducts"].items()) {
                std::cout << k << "," << lunaflow::format_number(v.get<double>()) << "\n";
            }
        }
        return kExitOk;
    }
    std::cout << "scenario   " << j.value("scenario", std::string("?")) << "\n";
    std::cout << "status     " << j.value("status", std::string("?")) << "\n";
    if (j.contains("objective")) {
        std::cout << "total cost $" << lunaflow::format_number(j["objective"].get<double>() / 1e6)
                  << " M\n";
    }
    if (j.contains("cost_breakdown")) {
        for (auto& [k, v] : j["cost_breakdown"].items()) {
            if (v.get<double>() != 0.0) {
                std::cout << "  " << k << ": $" << lunaflow::format_number(v.get<double>() / 1e6)
                          << " M\n";
            }
        }
    }
    if (j.contains("byproducts")) {
        for (auto& [k, v] : j["byproducts"].items()) {
            std::cout << "  " << k << ": " << lunaflow::format_number(v.get<double>()) << " kg\n";
        }
    }
    if (j.contains("replay")) {
        std::cout << "replay     " << j["replay"].value("verdict", std::string("?")) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lunaflow: cislunar logistics optimizer with ISRU byproduct accounting"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, format = "structured", sweep_name, report_path;
    bool strict = false, dump_lp = false;
    int jobs = 1;

    CLI::App* solve = app.add_subcommand("solve", "solve a scenario and write its reports");
    solve->add_option("scenario", scenario_path, "scenario file")->required();
    solve->add_option("-o,--out", out_dir, "output directory (or LUNAFLOW_OUTPUT_DIR)");
    solve->add_flag("--strict", strict, "exit nonzero when the replay verdict fails");
    solve->add_option("--format", format, "stdout format: structured|csv")
        ->check(CLI::IsMember({"structured", "csv"}));
    solve->add_flag("--dump-lp", dump_lp, "also write the problem in LP text format");

    CLI::App* sweep = app.add_subcommand("sweep", "run a named sensitivity sweep");
    sweep->add_option("scenario", scenario_path, "scenario file")->required();
    sweep->add_option("-n,--name", sweep_name, "sweep name defined in the scenario")->required();
    sweep->add_option("-o,--out", out_dir, "output directory (or LUNAFLOW_OUTPUT_DIR)");
    sweep->add_option("-j,--jobs", jobs, "worker threads for sweep rows")->check(CLI::PositiveNumber);

    CLI::App* validate = app.add_subcommand("validate", "load and validate without solving");
    validate->add_option("scenario", scenario_path, "scenario file")->required();

    CLI::App* report = app.add_subcommand("report", "render a previously written solve report");
    report->add_option("report", report_path, "report json written by solve")->required();
    report->add_option("--format", format, "stdout format: structured|csv")
        ->check(CLI::IsMember({"structured", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(scenario_path, out_dir, strict, format, dump_lp);
        if (sweep->parsed()) return cmd_sweep(scenario_path, sweep_name, out_dir, jobs);
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (report->parsed()) return cmd_report(report_path, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
