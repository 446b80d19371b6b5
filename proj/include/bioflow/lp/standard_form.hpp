#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bioflow/lp/model.hpp"

namespace bioflow::lp {

/// How an original variable is represented: x = shift + sign * col, plus
/// `- neg_col` for free variables split into two columns.
struct VarMap {
    std::size_t col = 0;
    double shift = 0.0;
    double sign = 1.0;
    std::optional<std::size_t> neg_col;
};

/// min c.x  s.t.  A x = b,  0 <= x <= upper.
/// Columns are the mapped model variables followed by one slack per
/// inequality row (+1 for <=, -1 for >=).
struct StandardForm {
    std::size_t rows = 0;
    std::size_t cols = 0;
    // CSC storage of A.
    std::vector<std::size_t> col_start;
    std::vector<std::size_t> row_index;
    std::vector<double> values;

    std::vector<double> rhs;
    std::vector<double> cost;
    std::vector<double> upper;
    /// Original objective = (maximize ? -1 : 1) * cost.x + offset.
    double offset = 0.0;
    bool maximize = false;

    std::vector<VarMap> var_map;
    std::vector<std::optional<std::size_t>> slack_of_row;
    std::size_t structural_cols = 0;

    double original_objective(const std::vector<double>& x) const;
};

/// Throws BadBounds when a variable has lower > upper (or NaN bounds), and
/// ModelError for other invariant violations.
StandardForm to_standard_form(const LpModel& model);

/// Standard-form point back to the model's variables.
std::vector<double> to_original(const StandardForm& sf, const std::vector<double>& x_std);

/// Model point into standard-form columns; slacks take the row residuals.
std::vector<double> from_original(const StandardForm& sf, const LpModel& model, const std::vector<double>& x);

}  // namespace bioflow::lp
