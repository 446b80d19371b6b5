#pragma once

#include <cstddef>
#include <optional>

#include "bioflow/lp/model.hpp"

namespace bioflow::lp {

struct SolverOptions {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-7;
    double optimality_tolerance = 1e-7;
    /// Defaults to 50 * (rows + columns) of the standard form.
    std::optional<std::size_t> max_iterations;
    std::size_t refactor_interval = 100;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    std::size_t bland_after = 50;
    /// Power-of-two geometric row/column scaling.
    bool scale = true;
};

/// Two-phase bounded-variable revised simplex with Dantzig pricing and a
/// Bland fallback on stalling. Deterministic for identical inputs.
Solution solve(const LpModel& model, const SolverOptions& options = {});

struct CertificateTolerances {
    double primal = 1e-6;  // relative to 1 + max |rhs|
    double dual = 1e-6;
    double complementarity = 1e-6;  // relative to 1 + |objective|
    double gap = 1e-6;              // relative to 1 + |objective|
};

struct CertificateReport {
    double primal_residual = 0.0;  // worst row or bound violation
    double dual_residual = 0.0;    // worst sign violation of multipliers / reduced costs
    double complementarity = 0.0;  // worst |multiplier * slack|
    double duality_gap = 0.0;      // |primal objective - dual objective|
    double primal_scale = 1.0;     // 1 + max |rhs|
    double objective_scale = 1.0;  // 1 + |objective|

    bool primal_ok(const CertificateTolerances& tol = {}) const {
        return primal_residual <= tol.primal * primal_scale;
    }
    bool dual_ok(const CertificateTolerances& tol = {}) const { return dual_residual <= tol.dual; }
    bool complementarity_ok(const CertificateTolerances& tol = {}) const {
        return complementarity <= tol.complementarity * objective_scale;
    }
    bool gap_ok(const CertificateTolerances& tol = {}) const { return duality_gap <= tol.gap * objective_scale; }
    bool accepted(const CertificateTolerances& tol = {}) const {
        return primal_ok(tol) && dual_ok(tol) && complementarity_ok(tol) && gap_ok(tol);
    }
};

/// KKT residuals of `solution` against `model`. Reduced costs are recomputed
/// from the multipliers rather than trusted.
CertificateReport check_certificate(const LpModel& model, const Solution& solution);

}  // namespace bioflow::lp
