#pragma once

// Test-only brute-force LP oracles. Deliberately shares nothing with the
// simplex implementation beyond the LpModel data structure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "bioflow/lp/model.hpp"

namespace oracle {

using bioflow::lp::LpModel;
using bioflow::lp::ObjectiveSense;
using bioflow::lp::RowSense;

/// Solves the k x k system M z = r by Gaussian elimination with partial
/// pivoting; nullopt when (numerically) singular.
inline std::optional<std::vector<double>> solve_dense(std::vector<std::vector<double>> M, std::vector<double> r) {
    const std::size_t k = r.size();
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        for (std::size_t i = c + 1; i < k; ++i)
            if (std::abs(M[i][c]) > std::abs(M[p][c])) p = i;
        if (std::abs(M[p][c]) < 1e-10) return std::nullopt;
        std::swap(M[p], M[c]);
        std::swap(r[p], r[c]);
        for (std::size_t i = c + 1; i < k; ++i) {
            const double f = M[i][c] / M[c][c];
            if (f == 0.0) continue;
            for (std::size_t j = c; j < k; ++j) M[i][j] -= f * M[c][j];
            r[i] -= f * r[c];
        }
    }
    std::vector<double> z(k);
    for (std::size_t ii = k; ii-- > 0;) {
        double s = r[ii];
        for (std::size_t j = ii + 1; j < k; ++j) s -= M[ii][j] * z[j];
        z[ii] = s / M[ii][ii];
    }
    return z;
}

inline bool feasible(const LpModel& m, const std::vector<double>& x, double tol) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto& v = m.variables[j];
        if (x[j] < v.lower - tol * (1 + std::abs(v.lower)) || x[j] > v.upper + tol * (1 + std::abs(v.upper)))
            return false;
    }
    for (std::size_t i = 0; i < m.constraints.size(); ++i) {
        const auto& c = m.constraints[i];
        double a = 0.0;
        for (const auto& t : c.terms) a += t.coef * x[t.var];
        const double slack = tol * (1 + std::abs(c.rhs));
        if (c.sense == RowSense::LessEqual && a > c.rhs + slack) return false;
        if (c.sense == RowSense::GreaterEqual && a < c.rhs - slack) return false;
        if (c.sense == RowSense::Equal && std::abs(a - c.rhs) > slack) return false;
    }
    return true;
}

/// Best objective over all vertices of a box-bounded model (every variable
/// needs finite bounds). Each vertex is enumerated as: a subset of "free"
/// variables determined by an equal number of active rows, the remaining
/// variables sitting at a bound. nullopt when no vertex is feasible.
inline std::optional<double> vertex_enumeration(const LpModel& m) {
    const std::size_t n = m.variables.size();
    const std::size_t rows = m.constraints.size();
    std::vector<std::vector<double>> A(rows, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < rows; ++i)
        for (const auto& t : m.constraints[i].terms) A[i][t.var] += t.coef;

    const bool maximize = m.sense == ObjectiveSense::Maximize;
    std::optional<double> best;
    std::vector<double> x(n);

    // state per variable: 0 lower, 1 upper, 2 free
    std::vector<int> state(n, 0);
    auto next_state = [&]() {
        for (std::size_t j = 0; j < n; ++j) {
            if (++state[j] <= 2) return true;
            state[j] = 0;
        }
        return false;
    };
    do {
        std::vector<std::size_t> free_vars;
        for (std::size_t j = 0; j < n; ++j) {
            if (state[j] == 2) free_vars.push_back(j);
            else x[j] = state[j] == 0 ? m.variables[j].lower : m.variables[j].upper;
        }
        const std::size_t k = free_vars.size();
        if (k > rows) continue;
        // all k-subsets of rows
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<std::vector<double>> M(k, std::vector<double>(k));
            std::vector<double> r(k);
            for (std::size_t a = 0; a < k; ++a) {
                const std::size_t i = pick[a];
                double rhs = m.constraints[i].rhs;
                for (std::size_t j = 0; j < n; ++j)
                    if (state[j] != 2) rhs -= A[i][j] * x[j];
                r[a] = rhs;
                for (std::size_t b = 0; b < k; ++b) M[a][b] = A[i][free_vars[b]];
            }
            auto z = k ? solve_dense(M, r) : std::optional<std::vector<double>>(std::vector<double>{});
            if (z) {
                for (std::size_t b = 0; b < k; ++b) x[free_vars[b]] = (*z)[b];
                if (feasible(m, x, 1e-9)) {
                    double obj = 0.0;
                    for (std::size_t j = 0; j < n; ++j) obj += m.objective[j] * x[j];
                    if (!best || (maximize ? obj > *best : obj < *best)) best = obj;
                }
            }
            // advance combination
            std::size_t a = k;
            while (a > 0 && pick[a - 1] == rows - k + (a - 1)) --a;
            if (a == 0) break;
            ++pick[a - 1];
            for (std::size_t b = a; b < k; ++b) pick[b] = pick[b - 1] + 1;
        }
    } while (next_state());
    return best;
}

/// Random box-bounded model that is feasible by construction: rows are
/// built around an interior point x0.
inline LpModel random_feasible_model(std::uint64_t seed, std::size_t max_vars = 8, std::size_t max_rows = 8) {
    std::mt19937_64 rng(seed);
    auto unif = [&](double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(unif(0, 1) * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
    };

    LpModel m;
    m.sense = unif(0, 1) < 0.5 ? ObjectiveSense::Minimize : ObjectiveSense::Maximize;
    const std::size_t n = pick(1, max_vars);
    const std::size_t rows = pick(1, max_rows);
    std::vector<double> x0(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = std::round(unif(-5, 1));
        const double hi = lo + std::round(unif(1, 10));
        m.add_variable("x" + std::to_string(j), lo, hi, std::round(unif(-10, 10) * 4) / 4);
        x0[j] = unif(lo, hi);
    }
    std::size_t equalities = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<bioflow::lp::Term> terms;
        double act = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (unif(0, 1) < 0.35) continue;
            const double a = std::round(unif(-6, 6) * 2) / 2;
            if (a == 0.0) continue;
            terms.push_back({j, a});
            act += a * x0[j];
        }
        if (terms.empty()) {
            terms.push_back({i % n, 1.0});
            act = x0[i % n];
        }
        const double u = unif(0, 1);
        RowSense s;
        double rhs;
        if (u < 0.15 && equalities + 1 < n) {
            s = RowSense::Equal;
            rhs = act;
            ++equalities;
        } else if (u < 0.6) {
            s = RowSense::LessEqual;
            rhs = act + (unif(0, 1) < 0.2 ? 0.0 : unif(0, 4));
        } else {
            s = RowSense::GreaterEqual;
            rhs = act - (unif(0, 1) < 0.2 ? 0.0 : unif(0, 4));
        }
        m.add_constraint("r" + std::to_string(i), std::move(terms), s, rhs);
    }
    return m;
}

}  // namespace oracle
