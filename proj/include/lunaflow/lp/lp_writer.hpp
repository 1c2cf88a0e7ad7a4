#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "lunaflow/lp/problem.hpp"

namespace lunaflow::lp {

/// Dumps the problem in CPLEX LP text format for cross-checking against
/// external solvers. Debugging aid only.
inline std::string write_lp_text(const MilpProblem& p) {
    std::ostringstream os;
    os.precision(17);
    auto name = [&](std::size_t j) {
        std::string n = p.var_names.empty() ? "x" + std::to_string(j) : p.var_names[j];
        for (char& c : n) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
        }
        return n;
    };

    os << "Minimize\n obj:";
    bool any = false;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        double c = p.objective[j];
        if (c == 0.0) continue;
        os << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << name(j);
        any = true;
    }
    if (!any) os << " 0";
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const Row& r = p.rows[i];
        os << " c" << i << ":";
        bool row_any = false;
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            double c = r.coef[j];
            if (c == 0.0) continue;
            os << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << name(j);
            row_any = true;
        }
        if (!row_any) os << " 0 " << name(0);
        os << (r.kind == RowKind::Equal ? " = " : " <= ") << r.rhs << "\n";
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        if (std::isinf(p.upper[j])) {
            if (p.lower[j] != 0.0) os << " " << name(j) << " >= " << p.lower[j] << "\n";
        } else {
            os << " " << p.lower[j] << " <= " << name(j) << " <= " << p.upper[j] << "\n";
        }
    }
    bool have_int = false;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        if (p.is_integer[j]) { have_int = true; break; }
    }
    if (have_int) {
        os << "General\n";
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            if (p.is_integer[j]) os << " " << name(j) << "\n";
        }
    }
    os << "End\n";
    return os.str();
}

}  // namespace lunaflow::lp
