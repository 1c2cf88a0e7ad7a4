#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace lunaflow::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowKind { Equal, LessEqual };

/// One dense constraint row: coef . x (= | <=) rhs.
struct Row {
    std::vector<double> coef;
    double rhs{0.0};
    RowKind kind{RowKind::Equal};
    std::string label;
};

/// A compiled mixed-integer linear program. Variables carry bounds
/// [lower, upper] (upper may be +inf; window-fixed variables have
/// upper == lower == 0) and an integrality flag.
struct MilpProblem {
    std::size_t num_vars{0};
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<bool> is_integer;
    std::vector<Row> rows;
    std::vector<std::string> var_names;
    /// Indices fixed to zero by time-window closures (Eq.-4 machinery).
    std::vector<std::size_t> window_fixed;

    std::size_t add_variable(const std::string& name, double lb, double ub, bool integer,
                             double cost) {
        var_names.push_back(name);
        lower.push_back(lb);
        upper.push_back(ub);
        is_integer.push_back(integer);
        objective.push_back(cost);
        return num_vars++;
    }

    Row& add_row(RowKind kind, double rhs, const std::string& label) {
        rows.push_back(Row{std::vector<double>(num_vars, 0.0), rhs, kind, label});
        return rows.back();
    }

    bool has_integer_vars() const {
        for (std::size_t i = 0; i < num_vars; ++i) {
            if (is_integer[i] && upper[i] > lower[i]) return true;
        }
        return false;
    }
};

enum class SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NodeLimit,
    NumericalBreakdown,
};

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::IterationLimit: return "iteration_limit";
        case SolveStatus::NodeLimit: return "node_limit";
        case SolveStatus::NumericalBreakdown: return "numerical_breakdown";
    }
    return "?";
}

struct Solution {
    SolveStatus status{SolveStatus::Infeasible};
    double objective_value{0.0};
    std::vector<double> x;
    std::vector<double> duals;         // one multiplier per row (LP relaxation)
    double lp_relaxation_bound{0.0};   // root relaxation objective (MILP solves)
    long iterations{0};
    long nodes_explored{0};
    std::string detail;                // breakdown/limit context
};

}  // namespace lunaflow::lp
