// Result tables and their table / CSV / JSON renderings.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qprospect::cli {

struct ResultRow {
    std::string label;
    double value = 0.0;
    std::string operation;  // library operation that produced the value
};

struct ResultTable {
    std::string command;
    std::string scenario_name;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<ResultRow> rows;

    void add(std::string label, double value, std::string operation);
};

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& name);

/// 12 significant digits, "%.12g" style; negative zero prints as 0.
std::string format_value(double v);

std::string render(const ResultTable& table, Format format);

}  // namespace qprospect::cli
