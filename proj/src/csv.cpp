#include "gazekit/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "gazekit/error.hpp"

namespace gazekit {

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::string::npos;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;

    const auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    const auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
            field_started = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
        } else {
            field += c;
            field_started = true;
        }
        ++i;
    }
    if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted CSV field");
    if (field_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

CsvTable parse_csv_table(std::string_view text) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorCode::ParseError, "CSV has no header row");
    CsvTable t;
    t.header = std::move(rows.front());
    t.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
    for (const auto& r : t.rows) {
        if (r.size() != t.header.size()) {
            throw Error(ErrorCode::ParseError, "CSV row has " + std::to_string(r.size()) + " fields, header has " +
                                                   std::to_string(t.header.size()));
        }
    }
    return t;
}

std::string format_csv_row(const CsvRow& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += ',';
        const auto& f = row[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            out += f;
        } else {
            out += '"';
            for (char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        }
    }
    out += '\n';
    return out;
}

std::string format_csv_table(const CsvTable& table) {
    std::string out = format_csv_row(table.header);
    for (const auto& r : table.rows) out += format_csv_row(r);
    return out;
}

std::string format_number(double value, int significant_digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant_digits);
    if (res.ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "number formatting failed");
    return std::string(buf, res.ptr);
}

}  // namespace gazekit
