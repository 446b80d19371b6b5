#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bioflow::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
};

/// Comma-separated, optional double-quote quoting, CRLF tolerated.
/// Blank lines are skipped.
Table read(std::istream& in);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest text that parses back to the same double.
std::string number(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace bioflow::csv
