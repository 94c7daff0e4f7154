#include "qprospect_cli/result.hpp"

#include <qprospect/numeric.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#ifndef QPROSPECT_VERSION
#define QPROSPECT_VERSION "unknown"
#endif

namespace qprospect::cli {

void ResultTable::add(std::string label, double value, std::string operation) {
    if (!std::isfinite(value)) throw NumericError("result '" + label + "' is not finite");
    rows.push_back(ResultRow{std::move(label), value, std::move(operation)});
}

Format parse_format(const std::string& name) {
    if (name == "table") return Format::Table;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ValidationError("output format", "unknown format '" + name + "' (expected table, csv or json)");
}

std::string format_value(double v) {
    if (v == 0.0) v = 0.0;  // drops the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_table(const ResultTable& t) {
    std::size_t wl = 5;
    std::size_t wv = 5;
    for (const auto& r : t.rows) {
        wl = std::max(wl, r.label.size());
        wv = std::max(wv, format_value(r.value).size());
    }
    std::ostringstream os;
    os << "# qprospect " << QPROSPECT_VERSION << " " << t.command;
    if (!t.scenario_name.empty()) os << " (" << t.scenario_name << ")";
    os << "\n# seed " << t.seed << ", tolerance " << format_value(t.tolerance) << "\n";
    auto line = [&](const std::string& a, const std::string& b, const std::string& c) {
        os << a << std::string(wl - a.size() + 2, ' ') << std::string(wv - b.size(), ' ') << b << "  " << c << "\n";
    };
    line("label", "value", "operation");
    for (const auto& r : t.rows) line(r.label, format_value(r.value), r.operation);
    return os.str();
}

std::string render_csv(const ResultTable& t) {
    std::string out = "label,value,operation\n";
    for (const auto& r : t.rows) {
        out += csv_field(r.label) + "," + format_value(r.value) + "," + csv_field(r.operation) + "\n";
    }
    return out;
}

std::string render_json(const ResultTable& t) {
    nlohmann::ordered_json root;
    root["command"] = t.command;
    if (!t.scenario_name.empty()) root["scenario"] = t.scenario_name;
    root["metadata"] = {{"version", QPROSPECT_VERSION}, {"seed", t.seed}, {"tolerance", t.tolerance}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        // Round through the 12-digit text so JSON carries the same digits as CSV.
        rows.push_back({{"label", r.label}, {"value", std::stod(format_value(r.value))}, {"operation", r.operation}});
    }
    root["rows"] = std::move(rows);
    return root.dump(2) + "\n";
}

}  // namespace

std::string render(const ResultTable& table, Format format) {
    switch (format) {
        case Format::Table: return render_table(table);
        case Format::Csv: return render_csv(table);
        case Format::Json: return render_json(table);
    }
    return {};
}

}  // namespace qprospect::cli
