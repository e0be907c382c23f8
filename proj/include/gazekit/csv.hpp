#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

using CsvRow = std::vector<std::string>;

/// A CSV document with a header row.
struct CsvTable {
    CsvRow header;
    std::vector<CsvRow> rows;

    /// Index of a header column, or npos.
    std::size_t column(std::string_view name) const;
};

/// RFC 4180 parsing: quoted fields, doubled quotes, CRLF or LF line ends.
std::vector<CsvRow> parse_csv(std::string_view text);
CsvTable parse_csv_table(std::string_view text);

/// One LF-terminated record; fields with ',', '"', CR or LF are quoted.
std::string format_csv_row(const CsvRow& row);
std::string format_csv_table(const CsvTable& table);

/// printf "%.<digits>g"; locale independent.
std::string format_number(double value, int significant_digits);

}  // namespace gazekit
