// report.hpp - Tabular results with bit-stable CSV/JSON rendering and atomic file output.

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace rabi::report {

using Cell = std::variant<double, long long, std::string, bool>;

// Shortest decimal string that round-trips to the same double (at most 17 significant
// digits); never locale-dependent. Non-finite values render as nan, inf, -inf.
std::string format_number(double value);

// True when a and b agree after rounding each to `digits` significant figures.
bool agrees_to_sig_figs(double a, double b, int digits);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    void add_row(std::vector<Cell> row);
    std::size_t column_index(const std::string& name) const;
    // Concatenates row sets; both tables must share the same columns.
    void append(const Table& other);
};

// UTF-8, comma separated, LF line endings, header first.
std::string to_csv(const Table& table);
// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}
std::string to_json(const Table& table);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace rabi::report
