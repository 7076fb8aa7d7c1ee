#include "rmdp/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmdp::csv {

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.emplace_back(line.substr(start));
            break;
        }
        cells.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("no CSV column named '" + std::string(name) + "'");
}

double Table::number_at(std::size_t row, std::string_view name) const {
    return std::stod(rows.at(row).at(column(name)));
}

Table parse(std::string_view text) {
    Table t;
    bool first = true;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) {
            if (first) {
                t.header = split_line(line);
                first = false;
            } else {
                t.rows.push_back(split_line(line));
            }
        }
        start = end + 1;
    }
    return t;
}

}  // namespace rmdp::csv
