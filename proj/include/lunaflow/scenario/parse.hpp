#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lunaflow/scenario/config.hpp"

namespace lunaflow {

/// Raised on malformed scenario text or invariant violations; carries the
/// source position (1-based) and, for semantic errors, the field path.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string msg, int line, int column)
        : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        std::ostringstream os;
        os << "scenario:" << line << ":" << column << ": " << msg;
        return os.str();
    }
    int line_;
    int column_;
};

namespace detail {

struct Cursor {
    int line;
    int column;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, Cursor at) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ScenarioError("expected a number, got '" + text + "'", at.line, at.column);
    }
    return v;
}

inline int parse_int(const std::string& text, Cursor at) {
    double v = parse_number(text, at);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ScenarioError("expected an integer, got '" + text + "'", at.line, at.column);
    }
    return i;
}

inline bool parse_bool(const std::string& text, Cursor at) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ScenarioError("expected true or false, got '" + text + "'", at.line, at.column);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline NodeKind parse_node_kind(const std::string& s, Cursor at) {
    if (s == "earth") return NodeKind::Earth;
    if (s == "leo") return NodeKind::Leo;
    if (s == "lunar_surface") return NodeKind::LunarSurface;
    if (s == "habitat") return NodeKind::Habitat;
    if (s == "disposal") return NodeKind::Disposal;
    throw ScenarioError("unknown node kind '" + s + "'", at.line, at.column);
}

inline ArcKind parse_arc_kind(const std::string& s, Cursor at) {
    if (s == "transport") return ArcKind::Transport;
    if (s == "transformation") return ArcKind::Transformation;
    throw ScenarioError("unknown arc kind '" + s + "' (holdover arcs are implicit)", at.line,
                        at.column);
}

}  // namespace detail

/// Parses the plain-text scenario format (see README for the schema).
/// Unset keys keep their baseline defaults; unknown keys and sections are
/// rejected with the offending position. Invariant violations report the
/// field path.
inline ScenarioConfig load_scenario(const std::string& text) {
    using detail::Cursor;
    ScenarioConfig cfg;
    bool network_nodes_reset = false;
    bool network_arcs_reset = false;
    std::vector<std::string> reset_rate_components;

    std::istringstream input(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(input, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        Cursor at{lineno, static_cast<int>(raw.find_first_not_of(" \t")) + 1};

        if (line.front() == '[') {
            if (line.back() != ']') throw ScenarioError("unterminated section header", lineno, at.column);
            section = detail::trim(line.substr(1, line.size() - 2));
            bool known = section == "costs" || section == "propulsion" || section == "demands" ||
                         section == "maintenance" || section == "delta_v" ||
                         section == "network.nodes" || section == "network.arcs" ||
                         section == "windows.disposal" || section.rfind("rates.", 0) == 0 ||
                         section.rfind("sweep.", 0) == 0;
            if (!known) throw ScenarioError("unknown section [" + section + "]", lineno, at.column);
            if (section.rfind("rates.", 0) == 0) {
                std::string comp = section.substr(6);
                if (std::find(reset_rate_components.begin(), reset_rate_components.end(), comp) ==
                    reset_rate_components.end()) {
                    cfg.component_rates[comp] = ComponentRates{comp, {}, {}, 0.0};
                    reset_rate_components.push_back(comp);
                }
            }
            if (section.rfind("sweep.", 0) == 0) {
                std::string name = section.substr(6);
                cfg.sweeps[name].name = name;
            }
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ScenarioError("expected key = value", lineno, at.column);
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        Cursor vat{lineno, at.column + static_cast<int>(eq) + 1};
        if (key.empty()) throw ScenarioError("missing key before '='", lineno, at.column);
        if (value.empty()) throw ScenarioError("missing value for key '" + key + "'", vat.line, vat.column);

        auto unknown_key = [&]() -> ScenarioError {
            std::string where = section.empty() ? "top level" : "[" + section + "]";
            return ScenarioError("unknown key '" + key + "' in " + where, lineno, at.column);
        };

        if (section.empty()) {
            if (key == "name") cfg.name = value;
            else if (key == "horizon_years") cfg.horizon_years = detail::parse_int(value, vat);
            else if (key == "isru_enabled") cfg.isru_enabled = detail::parse_bool(value, vat);
            else if (key == "productivity_multiplier") cfg.productivity_multiplier = detail::parse_number(value, vat);
            else throw unknown_key();
        } else if (section == "costs") {
            double v = detail::parse_number(value, vat);
            if (key == "launch_per_kg") cfg.costs.launch_per_kg = v;
            else if (key == "lh2_per_kg") cfg.costs.lh2_per_kg = v;
            else if (key == "lo2_per_kg") cfg.costs.lo2_per_kg = v;
            else if (key == "spacecraft_manufacturing") cfg.costs.spacecraft_manufacturing = v;
            else if (key == "spacecraft_operation_per_flight") cfg.costs.spacecraft_operation_per_flight = v;
            else if (key == "mixture_ratio") cfg.costs.mixture_ratio = v;
            else throw unknown_key();
        } else if (section == "propulsion") {
            double v = detail::parse_number(value, vat);
            if (key == "isp_s") cfg.propulsion.isp_s = v;
            else if (key == "g0") cfg.propulsion.g0 = v;
            else if (key == "structure_mass_kg") cfg.propulsion.structure_mass_kg = v;
            else if (key == "propellant_capacity_kg") cfg.propulsion.propellant_capacity_kg = v;
            else throw unknown_key();
        } else if (section == "demands") {
            double v = detail::parse_number(value, vat);
            if (key == "o2_per_year_kg") cfg.demands.o2_per_year_kg = v;
            else if (key == "h2o_per_year_kg") cfg.demands.h2o_per_year_kg = v;
            else throw unknown_key();
        } else if (section == "maintenance") {
            if (key == "rate_per_year") cfg.maintenance_rate_per_year = detail::parse_number(value, vat);
            else throw unknown_key();
        } else if (section == "delta_v") {
            if (key != "leg") throw unknown_key();
            auto parts = detail::split_ws(value);
            if (parts.size() != 3) {
                throw ScenarioError("expected 'leg = <from> <to> <m/s>'", vat.line, vat.column);
            }
            cfg.delta_v.set(parts[0], parts[1], detail::parse_number(parts[2], vat));
        } else if (section == "network.nodes") {
            if (key != "node") throw unknown_key();
            if (!network_nodes_reset) { cfg.network_nodes.clear(); network_nodes_reset = true; }
            auto parts = detail::split_ws(value);
            if (parts.size() != 2) throw ScenarioError("expected 'node = <id> <kind>'", vat.line, vat.column);
            cfg.network_nodes.push_back({parts[0], detail::parse_node_kind(parts[1], vat)});
        } else if (section == "network.arcs") {
            if (key != "arc") throw unknown_key();
            if (!network_arcs_reset) { cfg.network_arcs.clear(); network_arcs_reset = true; }
            auto parts = detail::split_ws(value);
            if (parts.size() != 4) {
                throw ScenarioError("expected 'arc = <from> <to> <kind> <time_of_flight>'", vat.line,
                                    vat.column);
            }
            cfg.network_arcs.push_back({parts[0], parts[1], detail::parse_arc_kind(parts[2], vat),
                                        detail::parse_int(parts[3], vat)});
        } else if (section == "windows.disposal") {
            if (key != "open") throw unknown_key();
            std::set<int> open;
            for (const auto& tok : detail::split_ws(value)) open.insert(detail::parse_int(tok, vat));
            cfg.disposal_open = open;
        } else if (section.rfind("rates.", 0) == 0) {
            ComponentRates& r = cfg.component_rates[section.substr(6)];
            if (key == "power") {
                r.power_kw_per_kg = detail::parse_number(value, vat);
            } else if (key == "product" || key == "consume") {
                auto parts = detail::split_ws(value);
                if (parts.size() != 2) {
                    throw ScenarioError("expected '" + key + " = <commodity> <rate>'", vat.line, vat.column);
                }
                double rate = detail::parse_number(parts[1], vat);
                if (rate <= 0.0) {
                    throw ScenarioError("component_rates." + r.component + "." + parts[0] +
                                            ": rate must be positive (sign comes from product/consume)",
                                        vat.line, vat.column);
                }
                (key == "product" ? r.products : r.consumptions)[parts[0]] = rate;
            } else {
                throw unknown_key();
            }
        } else if (section.rfind("sweep.", 0) == 0) {
            SweepSpec& sw = cfg.sweeps[section.substr(6)];
            if (key == "parameter") {
                if (value != "launch_cost" && value != "productivity_multiplier") {
                    throw ScenarioError("sweep parameter must be launch_cost or productivity_multiplier",
                                        vat.line, vat.column);
                }
                sw.parameter = value;
            } else if (key == "values") {
                sw.values.clear();
                for (const auto& tok : detail::split_ws(value)) {
                    sw.values.push_back(detail::parse_number(tok, vat));
                }
            } else if (key == "scenario") {
                if (value == "earth") sw.isru_override = false;
                else if (value == "isru") sw.isru_override = true;
                else throw ScenarioError("sweep scenario must be earth or isru", vat.line, vat.column);
            } else {
                throw unknown_key();
            }
        } else {
            throw unknown_key();
        }
    }

    // Invariants, reported with field paths.
    auto fail = [](const std::string& path, const std::string& why) {
        throw ScenarioError(path + ": " + why, 0, 0);
    };
    if (cfg.horizon_years < 1) fail("horizon_years", "must be >= 1");
    if (cfg.demands.o2_per_year_kg < 0) fail("demands.o2_per_year_kg", "must be nonnegative");
    if (cfg.demands.h2o_per_year_kg < 0) fail("demands.h2o_per_year_kg", "must be nonnegative");
    if (cfg.productivity_multiplier <= 0) fail("productivity_multiplier", "must be positive");
    if (cfg.costs.launch_per_kg < 0) fail("costs.launch_per_kg", "must be nonnegative");
    if (cfg.costs.lh2_per_kg < 0) fail("costs.lh2_per_kg", "must be nonnegative");
    if (cfg.costs.lo2_per_kg < 0) fail("costs.lo2_per_kg", "must be nonnegative");
    if (cfg.costs.spacecraft_manufacturing < 0) fail("costs.spacecraft_manufacturing", "must be nonnegative");
    if (cfg.costs.spacecraft_operation_per_flight < 0) {
        fail("costs.spacecraft_operation_per_flight", "must be nonnegative");
    }
    if (cfg.costs.mixture_ratio <= 0) fail("costs.mixture_ratio", "must be positive");
    if (cfg.propulsion.isp_s <= 0) fail("propulsion.isp_s", "must be positive");
    if (cfg.propulsion.propellant_capacity_kg <= 0) {
        fail("propulsion.propellant_capacity_kg", "must be positive");
    }
    if (cfg.propulsion.structure_mass_kg < 0) fail("propulsion.structure_mass_kg", "must be nonnegative");
    if (cfg.maintenance_rate_per_year < 0 || cfg.maintenance_rate_per_year > 1) {
        fail("maintenance.rate_per_year", "must lie in [0,1]");
    }
    for (const auto& [name, sw] : cfg.sweeps) {
        if (sw.parameter.empty()) fail("sweep." + name + ".parameter", "is required");
        if (sw.values.empty()) fail("sweep." + name + ".values", "must be nonempty");
        for (std::size_t i = 1; i < sw.values.size(); ++i) {
            if (sw.values[i] <= sw.values[i - 1]) {
                fail("sweep." + name + ".values", "must be strictly increasing");
            }
        }
    }
    return cfg;
}

}  // namespace lunaflow
