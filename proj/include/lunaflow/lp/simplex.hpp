#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lunaflow/lp/problem.hpp"

namespace lunaflow::lp {

struct SimplexOptions {
    double feasibility_tol{1e-6};     // relative, certified against ||b||
    double reduced_cost_tol{1e-9};
    /// Entries below this (on equilibrated data) are treated as zero in
    /// the ratio test; anything smaller sits inside the noise floor of
    /// the updated basis inverse.
    double pivot_tol{1e-7};
    long max_iterations{200000};
    int refactor_interval{32};
};

/// Bounded-variable primal simplex over the standardized system
/// Ax = b with slacks for <= rows and one artificial per row for phase 1.
/// Maintains an explicit dense basis inverse with product-form updates and
/// periodic refactorization. Dantzig pricing, switching to Bland's rule
/// after 10*(m+n) pivots without objective progress. Deterministic:
/// ties break toward the lowest variable index.
class SimplexSolver {
public:
    explicit SimplexSolver(SimplexOptions opts = {}) : opts_(opts) {}

    Solution solve(const MilpProblem& p) {
        Solution out = solve_once(p);
        if (out.status == SolveStatus::NumericalBreakdown && opts_.refactor_interval > 4) {
            // One cautious retry with near-constant refactorization; a
            // failure there is reported as the honest final answer.
            SimplexOptions cautious = opts_;
            cautious.refactor_interval = 4;
            return SimplexSolver(cautious).solve_once(p);
        }
        return out;
    }

    Solution solve_once(const MilpProblem& p) {
        build(p);
        Solution out;

        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1_cost(total_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) phase1_cost[art_begin_ + i] = 1.0;
        Status st = run(phase1_cost);
        if (st == Status::Breakdown) return breakdown(out);
        if (st == Status::IterLimit) return iter_limit(out);
        double art_sum = 0.0;
        for (std::size_t i = 0; i < m_; ++i) art_sum += value_of(art_begin_ + i);
        if (art_sum > opts_.feasibility_tol * (1.0 + bnorm_)) {
            out.status = SolveStatus::Infeasible;
            out.iterations = iterations_;
            return out;
        }

        // Phase 2: real objective with artificials pinned at zero.
        for (std::size_t i = 0; i < m_; ++i) ub_[art_begin_ + i] = 0.0;
        st = run(cost_);
        if (st == Status::Breakdown) return breakdown(out);
        if (st == Status::IterLimit) return iter_limit(out);
        if (st == Status::Unbounded) {
            out.status = SolveStatus::Unbounded;
            out.iterations = iterations_;
            return out;
        }

        out.x.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) out.x[j] = value_of(j) * col_scale_[j];
        out.objective_value = 0.0;
        for (std::size_t j = 0; j < n_; ++j) out.objective_value += problem_->objective[j] * out.x[j];
        out.iterations = iterations_;

        // Certify feasibility in original units:
        // ||Ax - b||_inf <= tol * (1 + ||b||_inf).
        double bnorm_orig = 0.0;
        for (const auto& r : problem_->rows) bnorm_orig = std::max(bnorm_orig, std::abs(r.rhs));
        double resid = residual_norm(out.x);
        if (resid > opts_.feasibility_tol * (1.0 + bnorm_orig)) {
            out.status = SolveStatus::NumericalBreakdown;
            out.detail = "residual " + std::to_string(resid) + " exceeds certified tolerance";
            return out;
        }

        // Duals from the final basis: y = c_B B^{-1}.
        compute_duals(out);
        out.status = SolveStatus::Optimal;
        out.lp_relaxation_bound = out.objective_value;
        return out;
    }

private:
    enum class Status { OptimalStop, Unbounded, IterLimit, Breakdown };
    enum class VarState : unsigned char { AtLower, AtUpper, Basic };

    SimplexOptions opts_;
    const MilpProblem* problem_{nullptr};

    std::size_t n_{0};       // structural variables
    std::size_t m_{0};       // rows
    std::size_t slack_begin_{0}, art_begin_{0}, total_{0};
    std::vector<double> cols_;   // dense column-major A, m_ x total_
    // sparse mirror of cols_, built once after equilibration; the pricing,
    // ftran and accuracy loops live on it
    std::vector<std::vector<std::pair<std::size_t, double>>> col_nz_;
    std::vector<double> b_;
    std::vector<double> lb_, ub_, cost_;
    std::vector<double> row_scale_, col_scale_;
    double bnorm_{0.0};

    std::vector<std::size_t> basic_;       // size m_: variable in each basis slot
    std::vector<VarState> state_;          // size total_
    std::vector<double> xb_;               // basic values, size m_
    std::vector<double> binv_;             // m_ x m_ row-major
    long iterations_{0};
    int pivots_since_refactor_{0};
    std::string breakdown_detail_;

    double col(std::size_t row, std::size_t var) const { return cols_[var * m_ + row]; }

    void build(const MilpProblem& p) {
        problem_ = &p;
        n_ = p.num_vars;
        m_ = p.rows.size();
        std::size_t slacks = 0;
        for (const auto& r : p.rows) {
            if (r.kind == RowKind::LessEqual) ++slacks;
        }
        slack_begin_ = n_;
        art_begin_ = n_ + slacks;
        total_ = art_begin_ + m_;

        cols_.assign(total_ * m_, 0.0);
        b_.assign(m_, 0.0);
        lb_.assign(total_, 0.0);
        ub_.assign(total_, kInf);
        cost_.assign(total_, 0.0);

        for (std::size_t j = 0; j < n_; ++j) {
            lb_[j] = p.lower[j];
            ub_[j] = p.upper[j];
            cost_[j] = p.objective[j];
        }
        std::size_t s = slack_begin_;
        for (std::size_t i = 0; i < m_; ++i) {
            const Row& r = p.rows[i];
            for (std::size_t j = 0; j < n_; ++j) cols_[j * m_ + i] = r.coef[j];
            b_[i] = r.rhs;
            if (r.kind == RowKind::LessEqual) cols_[s++ * m_ + i] = 1.0;
        }
        equilibrate();
        bnorm_ = 0.0;
        for (std::size_t i = 0; i < m_; ++i) bnorm_ = std::max(bnorm_, std::abs(b_[i]));

        col_nz_.assign(total_, {});
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t i = 0; i < m_; ++i) {
                if (cols_[j * m_ + i] != 0.0) col_nz_[j].emplace_back(i, cols_[j * m_ + i]);
            }
        }
        // slack and artificial columns are filled below as they are seeded

        // Start: structurals at their lower bound. Rows whose slack can
        // absorb the residual start with the slack basic; the rest get an
        // artificial sized (and signed) to do it.
        state_.assign(total_, VarState::AtLower);
        basic_.assign(m_, 0);
        xb_.assign(m_, 0.0);
        binv_.assign(m_ * m_, 0.0);
        std::size_t slack = slack_begin_;
        for (std::size_t i = 0; i < m_; ++i) {
            double resid = b_[i];
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (lb_[j] != 0.0) resid -= col(i, j) * lb_[j];
            }
            std::size_t basic_var;
            bool has_slack = problem_->rows[i].kind == RowKind::LessEqual;
            if (has_slack && resid >= 0.0) {
                basic_var = slack;
                cols_[(art_begin_ + i) * m_ + i] = 1.0;
                ub_[art_begin_ + i] = 0.0;  // artificial never needed for this row
            } else {
                basic_var = art_begin_ + i;
                cols_[basic_var * m_ + i] = resid >= 0.0 ? 1.0 : -1.0;
            }
            if (has_slack) ++slack;
            basic_[i] = basic_var;
            state_[basic_var] = VarState::Basic;
            xb_[i] = std::abs(resid);
            binv_[i * m_ + i] = cols_[basic_var * m_ + i];  // inverse of a +-1 diagonal
        }
        iterations_ = 0;
        pivots_since_refactor_ = 0;
    }

    /// Geometric-mean equilibration of the structural block, with scale
    /// factors snapped to powers of two so scaling is exact in floating
    /// point. Slack and artificial columns keep their +-1 coefficients.
    /// Bounds, costs and the rhs are folded into the scaled space; results
    /// are mapped back through col_scale_/row_scale_ on extraction.
    void equilibrate() {
        row_scale_.assign(m_, 1.0);
        col_scale_.assign(total_, 1.0);
        auto snap = [](double s) {
            if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
            return std::exp2(std::round(std::log2(s)));
        };
        for (int round = 0; round < 3; ++round) {
            for (std::size_t i = 0; i < m_; ++i) {
                double lo = kInf, hi = 0.0;
                for (std::size_t j = 0; j < n_; ++j) {
                    double a = std::abs(col(i, j));
                    if (a > 0.0) { lo = std::min(lo, a); hi = std::max(hi, a); }
                }
                if (hi == 0.0) continue;
                double r = snap(1.0 / std::sqrt(lo * hi));
                if (r == 1.0) continue;
                row_scale_[i] *= r;
                for (std::size_t j = 0; j < n_; ++j) cols_[j * m_ + i] *= r;
                b_[i] *= r;
            }
            for (std::size_t j = 0; j < n_; ++j) {
                double lo = kInf, hi = 0.0;
                for (std::size_t i = 0; i < m_; ++i) {
                    double a = std::abs(col(i, j));
                    if (a > 0.0) { lo = std::min(lo, a); hi = std::max(hi, a); }
                }
                if (hi == 0.0) continue;
                double c = snap(1.0 / std::sqrt(lo * hi));
                if (c == 1.0) continue;
                col_scale_[j] *= c;
                for (std::size_t i = 0; i < m_; ++i) cols_[j * m_ + i] *= c;
            }
        }
        // x_scaled = x / col_scale, so bounds shrink and costs grow by it.
        for (std::size_t j = 0; j < n_; ++j) {
            if (col_scale_[j] == 1.0) continue;
            lb_[j] /= col_scale_[j];
            if (!std::isinf(ub_[j])) ub_[j] /= col_scale_[j];
            cost_[j] *= col_scale_[j];
        }
    }

    double value_of(std::size_t var) const {
        if (state_[var] == VarState::AtLower) return lb_[var];
        if (state_[var] == VarState::AtUpper) return ub_[var];
        for (std::size_t i = 0; i < m_; ++i) {
            if (basic_[i] == var) return xb_[i];
        }
        return 0.0;
    }

    Status run(const std::vector<double>& c) {
        const long bland_trigger = 10 * static_cast<long>(m_ + total_);
        long stalled = 0;
        double last_obj = current_objective(c);

        std::vector<double> y(m_), w(m_);
        while (true) {
            if (iterations_ >= opts_.max_iterations) return Status::IterLimit;
            bool bland = stalled > bland_trigger;

            // y = c_B B^{-1}
            for (std::size_t i = 0; i < m_; ++i) y[i] = c[basic_[i]];
            multiply_left(y);

            // Price nonbasic variables.
            std::size_t enter = total_;
            int direction = 0;
            double best = bland ? 0.0 : -opts_.reduced_cost_tol;
            for (std::size_t j = 0; j < total_; ++j) {
                if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) continue;
                double d = c[j];
                for (std::size_t i = 0; i < m_; ++i) d -= y[i] * col(i, j);
                int dir = 0;
                if (state_[j] == VarState::AtLower && d < -opts_.reduced_cost_tol) dir = +1;
                if (state_[j] == VarState::AtUpper && d > opts_.reduced_cost_tol) dir = -1;
                if (dir == 0) continue;
                if (bland) { enter = j; direction = dir; break; }
                double score = dir > 0 ? d : -d;  // negative; most negative wins
                if (score < best) { best = score; enter = j; direction = dir; }
            }
            if (enter == total_) return Status::OptimalStop;

            // w = B^{-1} a_enter, with a drift check against B w = a_enter.
            // A stale inverse here is what turns a true zero pivot into a
            // phantom one and silently ruins the basis, so on disagreement
            // the inverse is rebuilt and w recomputed from fresh factors.
            for (std::size_t i = 0; i < m_; ++i) w[i] = col(i, enter);
            multiply_binv(w);
            if (!solve_is_accurate(enter, w)) {
                if (!refactorize()) return Status::Breakdown;
                for (std::size_t i = 0; i < m_; ++i) w[i] = col(i, enter);
                multiply_binv(w);
            }

            // Two-pass ratio test along +-direction. Pass one finds the
            // tightest step; pass two picks, among rows within a hair of
            // it, the one with the largest pivot magnitude so the basis
            // inverse stays well conditioned. Ties break on the lowest
            // variable index for determinism. The entering variable's own
            // bound span competes as a bound flip.
            double limit = ub_[enter] - lb_[enter];  // may be inf
            double min_step = limit;
            for (std::size_t i = 0; i < m_; ++i) {
                double g = direction * w[i];
                if (g > opts_.pivot_tol) {
                    min_step = std::min(min_step, (xb_[i] - lb_[basic_[i]]) / g);
                } else if (g < -opts_.pivot_tol && ub_[basic_[i]] < kInf) {
                    min_step = std::min(min_step, (ub_[basic_[i]] - xb_[i]) / (-g));
                }
            }
            if (std::isinf(min_step)) return Status::Unbounded;

            const double window = 1e-9 * (1.0 + std::abs(min_step));
            std::size_t leave = m_;
            int leave_to_upper = 0;
            double step = limit;
            double best_pivot = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                double g = direction * w[i];
                double t;
                int to_upper;
                if (g > opts_.pivot_tol) {
                    t = (xb_[i] - lb_[basic_[i]]) / g;
                    to_upper = 0;
                } else if (g < -opts_.pivot_tol && ub_[basic_[i]] < kInf) {
                    t = (ub_[basic_[i]] - xb_[i]) / (-g);
                    to_upper = 1;
                } else {
                    continue;
                }
                if (t > min_step + window) continue;
                bool better;
                if (bland) {
                    // Bland's rule needs the lowest-index candidate to leave,
                    // or its anti-cycling guarantee evaporates.
                    better = leave == m_ || basic_[i] < basic_[leave];
                } else {
                    double mag = std::abs(w[i]);
                    better = mag > best_pivot + 1e-15 ||
                             (mag > best_pivot - 1e-15 && leave != m_ && basic_[i] < basic_[leave]);
                    if (better) best_pivot = mag;
                }
                if (better) {
                    leave = i;
                    leave_to_upper = to_upper;
                    step = t;
                }
            }
            if (leave == m_) step = limit;  // bound flip of the entering variable
            step = std::max(std::min(step, limit), 0.0);

            // Apply the move.
            for (std::size_t i = 0; i < m_; ++i) xb_[i] -= direction * step * w[i];
            ++iterations_;

            if (leave == m_) {
                // Bound flip: entering variable crosses to its other bound.
                state_[enter] = direction > 0 ? VarState::AtUpper : VarState::AtLower;
            } else {
                std::size_t out_var = basic_[leave];
                state_[out_var] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
                state_[enter] = VarState::Basic;
                basic_[leave] = enter;
                xb_[leave] = (direction > 0 ? lb_[enter] : ub_[enter]) + direction * step;
                if (!pivot_update(leave, w)) {
                    if (!refactorize()) return Status::Breakdown;
                }
                if (++pivots_since_refactor_ >= opts_.refactor_interval) {
                    if (!refactorize()) return Status::Breakdown;
                }
            }

            double obj = current_objective(c);
            if (obj < last_obj - 1e-12) { stalled = 0; last_obj = obj; }
            else { ++stalled; }
        }
    }

    double current_objective(const std::vector<double>& c) const {
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) v += c[basic_[i]] * xb_[i];
        for (std::size_t j = 0; j < total_; ++j) {
            if (state_[j] == VarState::AtLower) v += c[j] * lb_[j];
            else if (state_[j] == VarState::AtUpper) v += c[j] * ub_[j];
        }
        return v;
    }

    // y <- y B^{-1} (row vector times matrix)
    void multiply_left(std::vector<double>& y) const {
        std::vector<double> out(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double yi = y[i];
            if (yi == 0.0) continue;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) out[k] += yi * row[k];
        }
        y.swap(out);
    }

    // w <- B^{-1} w
    void multiply_binv(std::vector<double>& w) const {
        std::vector<double> out(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = &binv_[i * m_];
            double s = 0.0;
            for (std::size_t k = 0; k < m_; ++k) s += row[k] * w[k];
            out[i] = s;
        }
        w.swap(out);
    }

    /// Residual check ||B w - a_enter|| against the raw basis columns.
    bool solve_is_accurate(std::size_t enter, const std::vector<double>& w) const {
        std::vector<double> bw(m_, 0.0);
        for (std::size_t slot = 0; slot < m_; ++slot) {
            double ws = w[slot];
            if (ws == 0.0) continue;
            const double* c = &cols_[basic_[slot] * m_];
            for (std::size_t i = 0; i < m_; ++i) bw[i] += c[i] * ws;
        }
        double err = 0.0, scale = 0.0;
        const double* a = &cols_[enter * m_];
        for (std::size_t i = 0; i < m_; ++i) {
            err = std::max(err, std::abs(bw[i] - a[i]));
            scale = std::max(scale, std::abs(a[i]));
        }
        return err <= 1e-7 * (1.0 + scale);
    }

    /// Product-form update of B^{-1} after replacing basis slot r, where w
    /// is B^{-1} a_enter. Returns false when the pivot element is too small.
    bool pivot_update(std::size_t r, const std::vector<double>& w) {
        double piv = w[r];
        if (std::abs(piv) < opts_.pivot_tol) return false;
        double inv = 1.0 / piv;
        for (std::size_t k = 0; k < m_; ++k) binv_[r * m_ + k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = w[i];
            if (f == 0.0) continue;
            const double* rr = &binv_[r * m_];
            double* ri = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) ri[k] -= f * rr[k];
        }
        return true;
    }

    /// Rebuilds B^{-1} from scratch by Gauss-Jordan with partial pivoting
    /// and recomputes the basic values. Returns false on a singular basis.
    bool refactorize() {
        std::vector<double> mat(m_ * m_, 0.0), inv(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            inv[i * m_ + i] = 1.0;
            for (std::size_t slot = 0; slot < m_; ++slot) mat[i * m_ + slot] = col(i, basic_[slot]);
        }
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t p = c;
            for (std::size_t i = c + 1; i < m_; ++i) {
                if (std::abs(mat[i * m_ + c]) > std::abs(mat[p * m_ + c])) p = i;
            }
            if (std::abs(mat[p * m_ + c]) < 1e-12) {
                breakdown_detail_ = "singular basis at pivot column " + std::to_string(c) +
                                    " (variable " + var_name(basic_[c]) + ")";
                return false;
            }
            if (p != c) {
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(mat[p * m_ + k], mat[c * m_ + k]);
                    std::swap(inv[p * m_ + k], inv[c * m_ + k]);
                }
            }
            double d = 1.0 / mat[c * m_ + c];
            for (std::size_t k = 0; k < m_; ++k) { mat[c * m_ + k] *= d; inv[c * m_ + k] *= d; }
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == c) continue;
                double f = mat[i * m_ + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    mat[i * m_ + k] -= f * mat[c * m_ + k];
                    inv[i * m_ + k] -= f * inv[c * m_ + k];
                }
            }
        }
        binv_.swap(inv);
        pivots_since_refactor_ = 0;

        // xb = B^{-1} (b - N x_N)
        std::vector<double> rhs(b_);
        for (std::size_t j = 0; j < total_; ++j) {
            double v = 0.0;
            if (state_[j] == VarState::AtLower) v = lb_[j];
            else if (state_[j] == VarState::AtUpper) v = ub_[j];
            else continue;
            if (v == 0.0) continue;
            for (std::size_t i = 0; i < m_; ++i) rhs[i] -= col(i, j) * v;
        }
        multiply_binv(rhs);
        xb_.swap(rhs);
        return true;
    }

    double residual_norm(const std::vector<double>& x) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const Row& r = problem_->rows[i];
            double ax = 0.0;
            for (std::size_t j = 0; j < n_; ++j) ax += r.coef[j] * x[j];
            double viol = r.kind == RowKind::Equal ? std::abs(ax - r.rhs) : std::max(0.0, ax - r.rhs);
            worst = std::max(worst, viol);
        }
        return worst;
    }

    void compute_duals(Solution& out) const {
        // y = c_B B^{-1} in the scaled space, mapped back per row.
        std::vector<double> y(m_);
        for (std::size_t i = 0; i < m_; ++i) y[i] = cost_[basic_[i]];
        std::vector<double> res(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double yi = y[i];
            if (yi == 0.0) continue;
            const double* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) res[k] += yi * row[k];
        }
        for (std::size_t i = 0; i < m_; ++i) res[i] *= row_scale_[i];
        out.duals = std::move(res);
    }

    std::string var_name(std::size_t j) const {
        if (j < n_) return problem_->var_names.empty() ? "x" + std::to_string(j) : problem_->var_names[j];
        if (j < art_begin_) return "slack" + std::to_string(j - slack_begin_);
        return "artificial" + std::to_string(j - art_begin_);
    }

    Solution& breakdown(Solution& out) {
        out.status = SolveStatus::NumericalBreakdown;
        out.detail = breakdown_detail_;
        out.iterations = iterations_;
        return out;
    }
    Solution& iter_limit(Solution& out) {
        out.status = SolveStatus::IterationLimit;
        out.iterations = iterations_;
        return out;
    }
};

/// Solves the LP relaxation (integrality ignored).
inline Solution solve_lp(const MilpProblem& p, SimplexOptions opts = {}) {
    return SimplexSolver(opts).solve(p);
}

}  // namespace lunaflow::lp
