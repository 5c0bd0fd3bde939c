#include "table.hpp"

#include <cmath>
#include <cstdio>

namespace recoil::cli {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

struct CsvCell {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
};

struct JsonCell {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(double v) const {
        if (!std::isfinite(v)) return nullptr;
        return v;
    }
    nlohmann::json operator()(long long v) const { return v; }
    nlohmann::json operator()(const std::string& s) const { return s; }
};

}  // namespace

std::string format_number(double v) {
    if (!std::isfinite(v)) return "";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [key, value] : t.meta) {
        os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.meta) meta[key] = value;
    doc["meta"] = meta;
    doc["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(std::visit(JsonCell{}, c));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
}

}  // namespace recoil::cli
