#include "bioflow/lp/model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace bioflow::lp {

std::size_t LpModel::add_variable(std::string name, double lower, double upper, double cost) {
    variables.push_back({std::move(name), lower, upper});
    objective.push_back(cost);
    return variables.size() - 1;
}

std::size_t LpModel::add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs) {
    constraints.push_back({std::move(name), std::move(terms), sense, rhs});
    return constraints.size() - 1;
}

double LpModel::objective_value(const std::vector<double>& x) const {
    double z = 0.0;
    for (std::size_t j = 0; j < objective.size() && j < x.size(); ++j) z += objective[j] * x[j];
    return z;
}

double LpModel::row_activity(std::size_t row, const std::vector<double>& x) const {
    double a = 0.0;
    for (const auto& t : constraints.at(row).terms) a += t.coef * x.at(t.var);
    return a;
}

std::vector<std::string> check_model(const LpModel& m) {
    std::vector<std::string> out;
    if (m.objective.size() != m.variables.size())
        out.push_back(fmt::format("objective has {} entries for {} variables", m.objective.size(),
                                  m.variables.size()));
    for (std::size_t j = 0; j < m.variables.size(); ++j) {
        const auto& v = m.variables[j];
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInf || v.upper == -kInf)
            out.push_back(fmt::format("variable {} has bad bounds [{}, {}]", v.name, v.lower, v.upper));
        if (j < m.objective.size() && !std::isfinite(m.objective[j]))
            out.push_back(fmt::format("variable {} has a non-finite cost", v.name));
    }
    for (const auto& c : m.constraints) {
        if (!std::isfinite(c.rhs)) out.push_back(fmt::format("constraint {} has a non-finite rhs", c.name));
        for (const auto& t : c.terms) {
            if (t.var >= m.variables.size())
                out.push_back(fmt::format("constraint {} references undeclared variable #{}", c.name, t.var));
            if (!std::isfinite(t.coef))
                out.push_back(fmt::format("constraint {} has a non-finite coefficient", c.name));
        }
    }
    return out;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::IterationLimit: return "IterationLimit";
    }
    return "?";
}

}  // namespace bioflow::lp
