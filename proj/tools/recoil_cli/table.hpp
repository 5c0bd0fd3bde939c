#pragma once

// Fixed-column result tables and their CSV / JSON writers.

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace recoil::cli {

/// Empty cells mark values that do not exist for a row (failed point, missing SI scale).
using Cell = std::variant<std::monostate, double, long long, std::string>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> columns;
    std::vector<Row> rows;
    /// Extra header entries (band edges, topology, ...), written in insertion order.
    std::vector<std::pair<std::string, nlohmann::json>> meta;
    std::size_t failed_rows = 0;
};

/// Shortest round-trip-safe rendering used by both writers; never "nan" or "inf".
std::string format_number(double v);

/// "# key: value" header lines, the column line, then one line per row.
void write_csv(std::ostream& os, const Table& t);

/// {"meta": {...}, "columns": [...], "rows": [[...], ...]} with null for empty cells.
void write_json(std::ostream& os, const Table& t);

}  // namespace recoil::cli
