#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bioflow/errors.hpp"

namespace bioflow::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class ObjectiveSense { Minimize, Maximize };

struct Term {
    std::size_t var = 0;
    double coef = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;

    friend bool operator==(const Variable&, const Variable&) = default;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

class BadBounds : public Error {
public:
    using Error::Error;
};

class ModelError : public Error {
public:
    using Error::Error;
};

/// Sparse linear program. Objective coefficients are kept per variable;
/// zero means the variable does not appear in the objective.
struct LpModel {
    ObjectiveSense sense = ObjectiveSense::Minimize;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<double> objective;

    std::size_t add_variable(std::string name, double lower = 0.0, double upper = kInf, double cost = 0.0);
    std::size_t add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);
    void set_cost(std::size_t var, double cost) { objective.at(var) = cost; }

    std::size_t num_variables() const { return variables.size(); }
    std::size_t num_constraints() const { return constraints.size(); }

    double objective_value(const std::vector<double>& x) const;
    /// a.x for row `row`.
    double row_activity(std::size_t row, const std::vector<double>& x) const;

    friend bool operator==(const LpModel&, const LpModel&) = default;
};

/// Invariant violations (bad bounds, dangling terms, non-finite rhs).
std::vector<std::string> check_model(const LpModel& model);

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> primal;
    /// Row multipliers y with reduced costs d = c - A^T y, in the model's own
    /// objective sense.
    std::vector<double> duals;
    std::vector<double> reduced_costs;
    std::size_t iterations = 0;

    bool optimal() const { return status == SolveStatus::Optimal; }

    friend bool operator==(const Solution&, const Solution&) = default;
};

}  // namespace bioflow::lp
