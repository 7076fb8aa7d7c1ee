#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rmdp::csv {

/// Shortest decimal form that round-trips to the same double.
std::string number(double x);

/// Splits one CSV line on commas (no quoting; our files never quote).
std::vector<std::string> split_line(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range if absent.
    std::size_t column(std::string_view name) const;
    double number_at(std::size_t row, std::string_view name) const;
};

Table parse(std::string_view text);

}  // namespace rmdp::csv
