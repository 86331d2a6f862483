#include <cmath>
#include <cstdio>
#include <ostream>

#include "bosecorr/cli.hpp"
#include "json.hpp"

namespace bosecorr::cli {

namespace {

std::string csv_field(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return "";
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

nlohmann::ordered_json json_value(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return nullptr;
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return nullptr;
        return *d;
    }
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    if (const auto* b = std::get_if<bool>(&c)) return *b;
    return std::get<std::string>(c);
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const Table& t, std::ostream& os) {
    for (const auto& [k, v] : t.metadata) os << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
    }
}

void write_json(const Table& t, std::ostream& os) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) r[t.columns[i]] = json_value(row[i]);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
}

}  // namespace bosecorr::cli
