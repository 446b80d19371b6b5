#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "bioflow/lp/model.hpp"

namespace bioflow::lp {

class ParseError : public ModelError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Sectioned text form:
///
///     BIOFLOW-LP 1 minimize
///     VARS
///     x
///     y
///     BOUNDS
///     y -inf 3
///     CONSTRAINTS
///     cover: +1 x +1 y >= 4
///     OBJECTIVE
///     x +2
///
/// VARS lists every variable in order; BOUNDS only those not in [0, inf);
/// OBJECTIVE only nonzero costs. Numbers carry 17 significant digits.
/// Names may not contain whitespace or ':'.
std::string write_model_text(const LpModel& model);

LpModel parse_model_text(std::string_view text);

}  // namespace bioflow::lp
