#include "nlap/report.hpp"

#include "nlap/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nlap {

void StudyReport::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw ShapeError("report row has " + std::to_string(row.size()) + " cells, expected " +
                         std::to_string(columns.size()));
    }
    for (const Cell& cell : row) {
        if (const double* v = std::get_if<double>(&cell); v != nullptr && !std::isfinite(*v)) {
            throw EvaluationError("report '" + name + "': non-finite value in a row");
        }
    }
    rows.push_back(std::move(row));
}

void StudyReport::add_meta(std::string key, std::string value) {
    meta.emplace_back(std::move(key), std::move(value));
}

void StudyReport::add_meta(std::string key, double value) {
    meta.emplace_back(std::move(key), format_number(value));
}

void StudyReport::check(bool ok, const std::string& what) {
    if (!ok) {
        failed_assertions.push_back(what);
    }
}

std::size_t StudyReport::column(const std::string& column_name) const {
    const auto it = std::find(columns.begin(), columns.end(), column_name);
    if (it == columns.end()) {
        throw std::out_of_range("report has no column '" + column_name + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

double StudyReport::number(std::size_t row, const std::string& column_name) const {
    const Cell& cell = rows.at(row).at(column(column_name));
    if (const double* v = std::get_if<double>(&cell)) {
        return *v;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& cell) {
    if (const double* v = std::get_if<double>(&cell)) {
        return format_number(*v);
    }
    if (const std::string* s = std::get_if<std::string>(&cell)) {
        return csv_escape(*s);
    }
    return "";
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    if (const double* v = std::get_if<double>(&cell)) {
        return *v;
    }
    if (const std::string* s = std::get_if<std::string>(&cell)) {
        return *s;
    }
    return nullptr;
}

}  // namespace

void write_csv(std::ostream& os, const StudyReport& report,
               const std::vector<std::string>& preamble) {
    for (const std::string& line : preamble) {
        os << "# " << line << '\n';
    }
    for (const auto& [key, value] : report.meta) {
        os << "# " << key << ": " << value << '\n';
    }
    for (const std::string& failure : report.failed_assertions) {
        os << "# FAILED: " << failure << '\n';
    }
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        os << (c ? "," : "") << csv_escape(report.columns[c]);
    }
    os << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << cell_text(row[c]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const StudyReport& report,
                const std::vector<std::string>& preamble) {
    nlohmann::ordered_json doc;
    doc["name"] = report.name;
    doc["preamble"] = preamble;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.meta) {
        meta[key] = value;
    }
    doc["meta"] = meta;
    doc["failed_assertions"] = report.failed_assertions;
    nlohmann::ordered_json columns = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        nlohmann::ordered_json values = nlohmann::ordered_json::array();
        for (const auto& row : report.rows) {
            values.push_back(cell_json(row[c]));
        }
        columns[report.columns[c]] = values;
    }
    doc["columns"] = columns;
    os << doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::strict) << '\n';
}

}  // namespace nlap
