#include "bioflow/lp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "bioflow/lp/standard_form.hpp"

namespace bioflow::lp {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper };

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

/// Product-form update: column `pos` of the basis replaced; `alpha` is the
/// FTRAN'd entering column, stored sparsely without the pivot entry.
struct Eta {
    std::size_t pos = 0;
    double pivot = 1.0;
    std::vector<std::size_t> index;
    std::vector<double> value;
};

double pow2_round(double v) { return std::exp2(std::round(std::log2(v))); }

class Simplex {
public:
    Simplex(const StandardForm& sf, const SolverOptions& opt) : opt_(opt), m_(sf.rows), n_(sf.cols) {
        col_start_ = sf.col_start;
        row_idx_ = sf.row_index;
        vals_ = sf.values;
        b_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) b_[static_cast<Eigen::Index>(i)] = sf.rhs[i];
        cost_ = sf.cost;
        upper_ = sf.upper;
        row_scale_.assign(m_, 1.0);
        col_scale_.assign(n_, 1.0);
        if (opt_.scale) scale();
        max_iterations_ = opt_.max_iterations.value_or(50 * (m_ + n_ + 1));
    }

    SolveStatus run() {
        install_initial_basis();
        refactor();
        if (num_artificial_ > 0) {
            std::vector<double> phase1(cost_.size(), 0.0);
            for (std::size_t j = n_; j < phase1.size(); ++j) phase1[j] = 1.0;
            auto r = run_phase(phase1);
            if (r == PhaseResult::IterationLimit) return SolveStatus::IterationLimit;
            double infeasibility = 0.0;
            for (std::size_t j = n_; j < x_.size(); ++j) infeasibility += x_[j];
            double bnorm = b_.size() ? b_.cwiseAbs().maxCoeff() : 0.0;
            if (infeasibility > opt_.feasibility_tolerance * (1.0 + bnorm)) return SolveStatus::Infeasible;
            drive_out_artificials();
        }
        auto r = run_phase(cost_);
        refactor();
        compute_basic_values();
        if (r == PhaseResult::IterationLimit) return SolveStatus::IterationLimit;
        if (r == PhaseResult::Unbounded) return SolveStatus::Unbounded;
        return SolveStatus::Optimal;
    }

    std::size_t iterations() const { return iterations_; }

    /// Unscaled standard-form primal values (structural + slack columns).
    std::vector<double> primal() const {
        std::vector<double> x(n_);
        for (std::size_t j = 0; j < n_; ++j) x[j] = x_[j] * col_scale_[j];
        return x;
    }

    /// Unscaled multipliers of the phase-2 problem.
    std::vector<double> duals() {
        Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
        for (std::size_t r = 0; r < m_; ++r) cb[static_cast<Eigen::Index>(r)] = cost_[head_[r]];
        Eigen::VectorXd y = btran(cb);
        std::vector<double> out(m_);
        for (std::size_t i = 0; i < m_; ++i) out[i] = y[static_cast<Eigen::Index>(i)] * row_scale_[i] / obj_scale_;
        return out;
    }

private:
    // ---- setup ------------------------------------------------------------

    void scale() {
        std::vector<double> rmin(m_), rmax(m_);
        for (int pass = 0; pass < 4; ++pass) {
            std::fill(rmin.begin(), rmin.end(), std::numeric_limits<double>::infinity());
            std::fill(rmax.begin(), rmax.end(), 0.0);
            for (std::size_t j = 0; j < n_; ++j) {
                for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                    double a = std::abs(vals_[k]) * row_scale_[row_idx_[k]] * col_scale_[j];
                    rmin[row_idx_[k]] = std::min(rmin[row_idx_[k]], a);
                    rmax[row_idx_[k]] = std::max(rmax[row_idx_[k]], a);
                }
            }
            for (std::size_t i = 0; i < m_; ++i) {
                if (rmax[i] > 0.0) row_scale_[i] /= std::sqrt(rmin[i] * rmax[i]);
            }
            for (std::size_t j = 0; j < n_; ++j) {
                double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
                for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                    double a = std::abs(vals_[k]) * row_scale_[row_idx_[k]] * col_scale_[j];
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
                if (hi > 0.0) col_scale_[j] /= std::sqrt(lo * hi);
            }
        }
        for (auto& r : row_scale_) r = pow2_round(r);
        for (auto& s : col_scale_) s = pow2_round(s);

        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
                vals_[k] *= row_scale_[row_idx_[k]] * col_scale_[j];
            cost_[j] *= col_scale_[j];
            if (std::isfinite(upper_[j])) upper_[j] /= col_scale_[j];
        }
        for (std::size_t i = 0; i < m_; ++i) b_[static_cast<Eigen::Index>(i)] *= row_scale_[i];

        double cmax = 0.0;
        for (double c : cost_) cmax = std::max(cmax, std::abs(c));
        if (cmax > 0.0) {
            obj_scale_ = pow2_round(1.0 / cmax);
            for (auto& c : cost_) c *= obj_scale_;
        }
    }

    /// Slack basis where the slack's sign fits the residual, artificials
    /// elsewhere. Everything else starts nonbasic at zero.
    void install_initial_basis() {
        x_.assign(n_, 0.0);
        state_.assign(n_, VarState::AtLower);
        pos_.assign(n_, kNone);
        head_.assign(m_, kNone);

        std::vector<std::size_t> slack_col(m_, kNone);
        for (std::size_t j = 0; j < n_; ++j) {
            if (col_start_[j + 1] - col_start_[j] != 1) continue;
            std::size_t i = row_idx_[col_start_[j]];
            // Any unbounded singleton column (slack or structural) will do.
            if (slack_col[i] == kNone && !std::isfinite(upper_[j])) slack_col[i] = j;
        }

        for (std::size_t i = 0; i < m_; ++i) {
            const double r = b_[static_cast<Eigen::Index>(i)];
            const std::size_t s = slack_col[i];
            if (s != kNone) {
                const double a = vals_[col_start_[s]];
                const double v = r / a;
                if (v >= 0.0) {
                    head_[i] = s;
                    pos_[s] = i;
                    state_[s] = VarState::Basic;
                    x_[s] = v;
                    continue;
                }
            }
            // artificial column
            const std::size_t j = x_.size();
            col_start_.push_back(col_start_.back() + 1);
            row_idx_.push_back(i);
            vals_.push_back(r >= 0.0 ? 1.0 : -1.0);
            cost_.push_back(0.0);
            upper_.push_back(std::numeric_limits<double>::infinity());
            x_.push_back(std::abs(r));
            state_.push_back(VarState::Basic);
            pos_.push_back(i);
            head_[i] = j;
            ++num_artificial_;
        }
    }

    // ---- linear algebra ---------------------------------------------------

    void refactor() {
        etas_.clear();
        if (m_ == 0) return;
        std::vector<Eigen::Triplet<double>> trip;
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t j = head_[r];
            for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
                trip.emplace_back(static_cast<int>(row_idx_[k]), static_cast<int>(r), vals_[k]);
        }
        Eigen::SparseMatrix<double> basis(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
        basis.setFromTriplets(trip.begin(), trip.end());
        basis.makeCompressed();
        lu_.analyzePattern(basis);
        lu_.factorize(basis);
        if (lu_.info() != Eigen::Success) throw Error("simplex basis factorization failed (singular basis)");
    }

    Eigen::VectorXd ftran(const Eigen::VectorXd& a) const {
        if (m_ == 0) return a;
        Eigen::VectorXd v = lu_.solve(a);
        for (const auto& e : etas_) {
            const double vp = v[static_cast<Eigen::Index>(e.pos)] / e.pivot;
            v[static_cast<Eigen::Index>(e.pos)] = vp;
            if (vp != 0.0) {
                for (std::size_t k = 0; k < e.index.size(); ++k)
                    v[static_cast<Eigen::Index>(e.index[k])] -= e.value[k] * vp;
            }
        }
        return v;
    }

    Eigen::VectorXd btran(Eigen::VectorXd w) const {
        if (m_ == 0) return w;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = w[static_cast<Eigen::Index>(it->pos)];
            for (std::size_t k = 0; k < it->index.size(); ++k)
                s -= it->value[k] * w[static_cast<Eigen::Index>(it->index[k])];
            w[static_cast<Eigen::Index>(it->pos)] = s / it->pivot;
        }
        Eigen::VectorXd y = lu_.transpose().solve(w);
        return y;
    }

    Eigen::VectorXd column(std::size_t j) const {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            a[static_cast<Eigen::Index>(row_idx_[k])] = vals_[k];
        return a;
    }

    double dot_column(const Eigen::VectorXd& y, std::size_t j) const {
        double s = 0.0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            s += y[static_cast<Eigen::Index>(row_idx_[k])] * vals_[k];
        return s;
    }

    void compute_basic_values() {
        Eigen::VectorXd r = b_;
        for (std::size_t j = 0; j < x_.size(); ++j) {
            if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
            for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
                r[static_cast<Eigen::Index>(row_idx_[k])] -= vals_[k] * x_[j];
        }
        Eigen::VectorXd xb = ftran(r);
        for (std::size_t p = 0; p < m_; ++p) x_[head_[p]] = xb[static_cast<Eigen::Index>(p)];
    }

    // ---- pivoting ---------------------------------------------------------

    void pivot(std::size_t entering, std::size_t leave_pos, const Eigen::VectorXd& alpha) {
        Eta e;
        e.pos = leave_pos;
        e.pivot = alpha[static_cast<Eigen::Index>(leave_pos)];
        for (std::size_t i = 0; i < m_; ++i) {
            const double v = alpha[static_cast<Eigen::Index>(i)];
            if (i != leave_pos && v != 0.0) {
                e.index.push_back(i);
                e.value.push_back(v);
            }
        }
        etas_.push_back(std::move(e));

        const std::size_t leaving = head_[leave_pos];
        pos_[leaving] = kNone;
        head_[leave_pos] = entering;
        pos_[entering] = leave_pos;
        state_[entering] = VarState::Basic;
        if (etas_.size() >= opt_.refactor_interval) {
            refactor();
            compute_basic_values();
        }
    }

    PhaseResult run_phase(const std::vector<double>& cost) {
        std::size_t degenerate_run = 0;
        bool bland = false;
        Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
        while (true) {
            if (iterations_ >= max_iterations_) return PhaseResult::IterationLimit;

            for (std::size_t r = 0; r < m_; ++r) cb[static_cast<Eigen::Index>(r)] = cost[head_[r]];
            const Eigen::VectorXd y = btran(cb);

            // Pricing.
            std::size_t q = kNone;
            double best = 0.0;
            for (std::size_t j = 0; j < x_.size(); ++j) {
                if (state_[j] == VarState::Basic || upper_[j] <= 0.0) continue;
                const double d = cost[j] - dot_column(y, j);
                const bool improving = (state_[j] == VarState::AtLower && d < -opt_.optimality_tolerance) ||
                                       (state_[j] == VarState::AtUpper && d > opt_.optimality_tolerance);
                if (!improving) continue;
                if (bland) {
                    q = j;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    q = j;
                }
            }
            if (q == kNone) return PhaseResult::Optimal;

            const double dir = state_[q] == VarState::AtLower ? 1.0 : -1.0;
            const Eigen::VectorXd alpha = ftran(column(q));

            // Ratio test; ties go to the lowest variable index.
            double theta = std::numeric_limits<double>::infinity();
            std::size_t leave = kNone;
            bool leave_to_upper = false;
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = alpha[static_cast<Eigen::Index>(r)] * dir;
                if (std::abs(a) <= opt_.pivot_tolerance) continue;
                const std::size_t j = head_[r];
                double t;
                bool to_upper;
                if (a > 0.0) {
                    t = x_[j] / a;
                    to_upper = false;
                } else {
                    if (!std::isfinite(upper_[j])) continue;
                    t = (upper_[j] - x_[j]) / -a;
                    to_upper = true;
                }
                t = std::max(t, 0.0);
                const double tie = 1e-12 * std::max(1.0, std::min(t, theta));
                if (t < theta - tie || (t <= theta + tie && leave != kNone && j < head_[leave])) {
                    theta = t;
                    leave = r;
                    leave_to_upper = to_upper;
                }
            }

            const double range = upper_[q];
            const bool flip = range <= theta;
            if (flip) theta = range;
            if (!std::isfinite(theta)) return PhaseResult::Unbounded;

            ++iterations_;
            for (std::size_t r = 0; r < m_; ++r)
                x_[head_[r]] -= dir * theta * alpha[static_cast<Eigen::Index>(r)];
            x_[q] += dir * theta;

            if (flip) {
                state_[q] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
                x_[q] = dir > 0 ? upper_[q] : 0.0;
            } else {
                const std::size_t leaving = head_[leave];
                state_[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
                x_[leaving] = leave_to_upper ? upper_[leaving] : 0.0;
                pivot(q, leave, alpha);
            }

            if (theta <= 1e-12) {
                if (++degenerate_run >= opt_.bland_after) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
        }
    }

    void drive_out_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (head_[r] < n_) continue;
            Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_));
            e[static_cast<Eigen::Index>(r)] = 1.0;
            const Eigen::VectorXd rho = btran(e);
            std::size_t best = kNone;
            double best_abs = 1e-7;
            for (std::size_t j = 0; j < n_; ++j) {
                if (state_[j] == VarState::Basic) continue;
                const double v = std::abs(dot_column(rho, j));
                if (v > best_abs) {
                    best_abs = v;
                    best = j;
                }
            }
            if (best == kNone) continue;  // redundant row: artificial stays basic at zero
            const Eigen::VectorXd alpha = ftran(column(best));
            const std::size_t art = head_[r];
            state_[art] = VarState::AtLower;
            x_[art] = 0.0;
            pivot(best, r, alpha);
        }
        for (std::size_t j = n_; j < x_.size(); ++j) {
            upper_[j] = 0.0;
            if (state_[j] != VarState::Basic) {
                state_[j] = VarState::AtLower;
                x_[j] = 0.0;
            }
        }
        refactor();
        compute_basic_values();
    }

    const SolverOptions& opt_;
    std::size_t m_;
    std::size_t n_;
    std::vector<std::size_t> col_start_;
    std::vector<std::size_t> row_idx_;
    std::vector<double> vals_;
    Eigen::VectorXd b_;
    std::vector<double> cost_;
    std::vector<double> upper_;
    std::vector<double> row_scale_;
    std::vector<double> col_scale_;
    double obj_scale_ = 1.0;

    std::vector<double> x_;
    std::vector<VarState> state_;
    std::vector<std::size_t> pos_;
    std::vector<std::size_t> head_;
    std::size_t num_artificial_ = 0;

    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    std::size_t iterations_ = 0;
    std::size_t max_iterations_ = 0;
};

}  // namespace

Solution solve(const LpModel& model, const SolverOptions& options) {
    const StandardForm sf = to_standard_form(model);
    Simplex simplex(sf, options);
    Solution sol;
    sol.status = simplex.run();
    sol.iterations = simplex.iterations();
    sol.primal = to_original(sf, simplex.primal());
    sol.objective = model.objective_value(sol.primal);

    const double sign = sf.maximize ? -1.0 : 1.0;
    sol.duals = simplex.duals();
    for (auto& y : sol.duals) y *= sign;
    sol.reduced_costs = model.objective;
    for (std::size_t i = 0; i < model.constraints.size(); ++i) {
        for (const auto& t : model.constraints[i].terms) sol.reduced_costs[t.var] -= t.coef * sol.duals[i];
    }
    return sol;
}

CertificateReport check_certificate(const LpModel& model, const Solution& solution) {
    CertificateReport rep;
    const auto& x = solution.primal;
    const auto& y = solution.duals;
    const bool maximize = model.sense == ObjectiveSense::Maximize;
    // In a minimization, <= rows carry y <= 0 and >= rows y >= 0; reduced
    // costs are >= 0 at a lower bound and <= 0 at an upper bound. A
    // maximization mirrors every sign.
    const double s = maximize ? -1.0 : 1.0;

    double bmax = 0.0;
    for (const auto& c : model.constraints) bmax = std::max(bmax, std::abs(c.rhs));
    rep.primal_scale = 1.0 + bmax;
    const double obj = model.objective_value(x);
    rep.objective_scale = 1.0 + std::abs(obj);

    std::vector<double> rc = model.objective;
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < model.constraints.size(); ++i) {
        const auto& c = model.constraints[i];
        const double act = model.row_activity(i, x);
        const double yi = i < y.size() ? y[i] : 0.0;
        for (const auto& t : c.terms) rc[t.var] -= t.coef * yi;
        dual_obj += c.rhs * yi;

        double viol = 0.0;
        switch (c.sense) {
            case RowSense::LessEqual:
                viol = std::max(0.0, act - c.rhs);
                rep.dual_residual = std::max(rep.dual_residual, std::max(0.0, s * yi));
                break;
            case RowSense::GreaterEqual:
                viol = std::max(0.0, c.rhs - act);
                rep.dual_residual = std::max(rep.dual_residual, std::max(0.0, -s * yi));
                break;
            case RowSense::Equal: viol = std::abs(act - c.rhs); break;
        }
        rep.primal_residual = std::max(rep.primal_residual, viol);
        if (c.sense != RowSense::Equal)
            rep.complementarity = std::max(rep.complementarity, std::abs(yi * (act - c.rhs)));
    }

    for (std::size_t j = 0; j < model.variables.size(); ++j) {
        const auto& v = model.variables[j];
        const double xj = x[j];
        rep.primal_residual = std::max(rep.primal_residual, std::max(0.0, v.lower - xj));
        rep.primal_residual = std::max(rep.primal_residual, std::max(0.0, xj - v.upper));

        // Sign-normalized reduced cost: positive pushes toward the lower bound.
        const double d = s * rc[j];
        double bound_term = 0.0;
        if (d > 0.0) {
            if (std::isfinite(v.lower)) {
                bound_term = rc[j] * v.lower;
                rep.complementarity = std::max(rep.complementarity, std::abs(rc[j] * (xj - v.lower)));
            } else {
                rep.dual_residual = std::max(rep.dual_residual, d);
                bound_term = rc[j] * xj;
            }
        } else if (d < 0.0) {
            if (std::isfinite(v.upper)) {
                bound_term = rc[j] * v.upper;
                rep.complementarity = std::max(rep.complementarity, std::abs(rc[j] * (v.upper - xj)));
            } else {
                rep.dual_residual = std::max(rep.dual_residual, -d);
                bound_term = rc[j] * xj;
            }
        }
        dual_obj += bound_term;
    }
    rep.duality_gap = std::abs(obj - dual_obj);
    return rep;
}

}  // namespace bioflow::lp
