#include "bioflow/lp/standard_form.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

namespace bioflow::lp {

double StandardForm::original_objective(const std::vector<double>& x) const {
    double z = 0.0;
    for (std::size_t j = 0; j < cols; ++j) z += cost[j] * x[j];
    return (maximize ? -z : z) + offset;
}

StandardForm to_standard_form(const LpModel& model) {
    for (const auto& v : model.variables) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInf || v.upper == -kInf)
            throw BadBounds(fmt::format("variable {} has bounds [{}, {}]", v.name, v.lower, v.upper));
    }
    if (auto problems = check_model(model); !problems.empty()) throw ModelError(problems.front());

    StandardForm sf;
    sf.rows = model.constraints.size();
    sf.maximize = model.sense == ObjectiveSense::Maximize;
    const double obj_sign = sf.maximize ? -1.0 : 1.0;

    // Column layout for model variables.
    std::size_t col = 0;
    sf.var_map.resize(model.variables.size());
    for (std::size_t j = 0; j < model.variables.size(); ++j) {
        const auto& v = model.variables[j];
        auto& vm = sf.var_map[j];
        vm.col = col++;
        if (std::isfinite(v.lower)) {
            vm.shift = v.lower;
            vm.sign = 1.0;
            sf.upper.push_back(v.upper - v.lower);
        } else if (std::isfinite(v.upper)) {
            vm.shift = v.upper;
            vm.sign = -1.0;
            sf.upper.push_back(kInf);
        } else {
            vm.shift = 0.0;
            vm.sign = 1.0;
            vm.neg_col = col++;
            sf.upper.push_back(kInf);
            sf.upper.push_back(kInf);
        }
    }
    sf.structural_cols = col;

    sf.slack_of_row.resize(sf.rows);
    for (std::size_t i = 0; i < sf.rows; ++i) {
        if (model.constraints[i].sense != RowSense::Equal) {
            sf.slack_of_row[i] = col++;
            sf.upper.push_back(kInf);
        }
    }
    sf.cols = col;

    // Objective and shifted right-hand sides.
    sf.cost.assign(sf.cols, 0.0);
    for (std::size_t j = 0; j < model.variables.size(); ++j) {
        const double c = model.objective[j];
        const auto& vm = sf.var_map[j];
        sf.offset += c * vm.shift;
        sf.cost[vm.col] = obj_sign * c * vm.sign;
        if (vm.neg_col) sf.cost[*vm.neg_col] = -obj_sign * c;
    }

    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;  // (col, row, value)
    sf.rhs.assign(sf.rows, 0.0);
    for (std::size_t i = 0; i < sf.rows; ++i) {
        const auto& c = model.constraints[i];
        double b = c.rhs;
        for (const auto& t : c.terms) {
            const auto& vm = sf.var_map[t.var];
            b -= t.coef * vm.shift;
            triplets.emplace_back(vm.col, i, t.coef * vm.sign);
            if (vm.neg_col) triplets.emplace_back(*vm.neg_col, i, -t.coef);
        }
        sf.rhs[i] = b;
        if (sf.slack_of_row[i])
            triplets.emplace_back(*sf.slack_of_row[i], i, c.sense == RowSense::LessEqual ? 1.0 : -1.0);
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) { return std::tie(std::get<0>(a), std::get<1>(a)) <
                                                        std::tie(std::get<0>(b), std::get<1>(b)); });

    sf.col_start.assign(sf.cols + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
        auto [cj, ri, v] = triplets[k];
        double sum = v;
        std::size_t k2 = k + 1;
        while (k2 < triplets.size() && std::get<0>(triplets[k2]) == cj && std::get<1>(triplets[k2]) == ri)
            sum += std::get<2>(triplets[k2++]);
        if (sum != 0.0) {
            sf.row_index.push_back(ri);
            sf.values.push_back(sum);
            ++sf.col_start[cj + 1];
        }
        k = k2;
    }
    for (std::size_t j = 0; j < sf.cols; ++j) sf.col_start[j + 1] += sf.col_start[j];
    return sf;
}

std::vector<double> to_original(const StandardForm& sf, const std::vector<double>& x_std) {
    std::vector<double> x(sf.var_map.size());
    for (std::size_t j = 0; j < sf.var_map.size(); ++j) {
        const auto& vm = sf.var_map[j];
        x[j] = vm.shift + vm.sign * x_std.at(vm.col);
        if (vm.neg_col) x[j] -= x_std.at(*vm.neg_col);
    }
    return x;
}

std::vector<double> from_original(const StandardForm& sf, const LpModel& model, const std::vector<double>& x) {
    std::vector<double> xs(sf.cols, 0.0);
    for (std::size_t j = 0; j < sf.var_map.size(); ++j) {
        const auto& vm = sf.var_map[j];
        if (vm.neg_col) {
            xs[vm.col] = std::max(x[j], 0.0);
            xs[*vm.neg_col] = std::max(-x[j], 0.0);
        } else {
            xs[vm.col] = (x[j] - vm.shift) * vm.sign;
        }
    }
    for (std::size_t i = 0; i < sf.rows; ++i) {
        if (!sf.slack_of_row[i]) continue;
        const auto& c = model.constraints[i];
        const double act = model.row_activity(i, x);
        xs[*sf.slack_of_row[i]] = c.sense == RowSense::LessEqual ? c.rhs - act : act - c.rhs;
    }
    return xs;
}

}  // namespace bioflow::lp
