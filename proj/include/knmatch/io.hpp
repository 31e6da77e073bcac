#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace knmatch {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> summary;  // trailing one-per-line annotations
};

/// Shortest representation that parses back to the identical double
/// (17 significant digits).
inline std::string format_full(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Display rounding: fixed decimals, switching to scientific below 1e-3.
inline std::string format_display(double v, int places)
{
    char buf[64];
    if (v != 0.0 && std::abs(v) < 1e-3) {
        std::snprintf(buf, sizeof(buf), "%.*e", places, v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    }
    return std::string(buf);
}

inline void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ',';
        os << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const double* d = std::get_if<double>(&row[i])) {
                os << format_full(*d);
            } else {
                os << std::get<std::string>(row[i]);
            }
        }
        os << '\n';
    }
    for (const auto& line : table.summary) os << line << '\n';
}

inline void write_json(std::ostream& os, const nlohmann::ordered_json& config, const Table& table)
{
    nlohmann::ordered_json doc;
    doc["config"] = config;
    doc["columns"] = table.columns;
    auto& rows = doc["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (const double* d = std::get_if<double>(&cell)) {
                jrow.push_back(*d);
            } else {
                jrow.push_back(std::get<std::string>(cell));
            }
        }
        rows.push_back(std::move(jrow));
    }
    if (!table.summary.empty()) doc["summary"] = table.summary;
    os << doc.dump(2) << '\n';
}

}  // namespace knmatch
