#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlap {

/// Empty, numeric or text table cell.
using Cell = std::variant<std::monostate, double, std::string>;

/// Tabular study output plus key/value metadata and assertion outcomes.
struct StudyReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> failed_assertions;

    void add_row(std::vector<Cell> row);
    void add_meta(std::string key, std::string value);
    void add_meta(std::string key, double value);
    /// Records a failed check under `what` when `ok` is false.
    void check(bool ok, const std::string& what);
    bool passed() const { return failed_assertions.empty(); }
    /// Index of a named column; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
    /// Numeric cell value; NaN for empty or text cells.
    double number(std::size_t row, const std::string& column_name) const;
};

/// 17 significant digits, shortest round-trip form.
std::string format_number(double value);

/// Comment lines ("# ...") carry `preamble`, then metadata, then the header and rows.
void write_csv(std::ostream& os, const StudyReport& report,
               const std::vector<std::string>& preamble = {});
void write_json(std::ostream& os, const StudyReport& report,
                const std::vector<std::string>& preamble = {});

}  // namespace nlap
