#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace caperc::csv {

/// Lossless float formatting: 17 significant digits, '.' decimal separator.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) {
        if (row.size() != header.size())
            throw std::invalid_argument("csv: row width does not match header");
        rows.push_back(std::move(row));
    }
};

namespace detail {

inline std::string quote_if_needed(const std::string& s) {
    bool needs = false;
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs = true;
            break;
        }
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string render(const Cell& cell) {
    if (std::holds_alternative<std::string>(cell))
        return quote_if_needed(std::get<std::string>(cell));
    if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
    if (std::holds_alternative<std::int64_t>(cell))
        return std::to_string(std::get<std::int64_t>(cell));
    return std::to_string(std::get<std::uint64_t>(cell));
}

}  // namespace detail

/// RFC-4180 emission, LF newlines, header row first.
inline void emit_csv(const Table& table, std::ostream& out) {
    if (table.header.empty()) throw std::invalid_argument("emit_csv: empty table");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << detail::quote_if_needed(table.header[i]);
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << detail::render(row[i]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("emit_csv: stream failure");
}

}  // namespace caperc::csv
