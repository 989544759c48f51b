#pragma once

// CSV reader/writer for the fixed dialect of the pricing-game files:
// comma separated, double-quote escaping ("" inside a quoted field),
// dot decimal separator, UTF-8 passed through verbatim. CRLF and a
// trailing newline are tolerated on input.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sinistre {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parsed CSV file: one header row plus rectangular data rows.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    }

    /// Column index by name, or CsvError naming the missing column.
    std::size_t require_column(std::string_view name) const {
        if (auto idx = column(name)) return *idx;
        throw CsvError(source + ": missing required column '" + std::string(name) + "'");
    }
};

namespace detail {

// Splits raw text into records of fields, honouring quoted fields with
// embedded commas, newlines and doubled quotes.
inline std::vector<std::vector<std::string>> tokenize_csv(std::string_view text,
                                                          const std::string& source) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted) {
                    throw CsvError(source + " line " + std::to_string(line) +
                                   ": stray quote inside unquoted field");
                }
                in_quotes = true;
                field_was_quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                // swallowed; the following '\n' ends the record
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field.push_back(c);
                break;
        }
    }
    if (in_quotes) {
        throw CsvError(source + ": unterminated quoted field at end of input");
    }
    if (!field.empty() || field_was_quoted || !fields.empty()) {
        end_record();
    }
    return records;
}

} // namespace detail

/// Parses CSV text. The first record is the header; every data record must
/// have the same field count as the header.
inline CsvTable parse_csv(std::string_view text, std::string source = "<memory>") {
    CsvTable table;
    table.source = std::move(source);
    auto records = detail::tokenize_csv(text, table.source);
    if (records.empty()) {
        throw CsvError(table.source + ": empty file (no header row)");
    }
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw CsvError(table.source + " row " + std::to_string(r + 1) + ": expected " +
                           std::to_string(table.header.size()) + " fields, got " +
                           std::to_string(records[r].size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CsvError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw CsvError("I/O failure while reading '" + path.string() + "'");
    }
    return parse_csv(buf.str(), path.string());
}

/// Quotes a field if it contains a delimiter, quote or newline.
inline std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

// Locale-independent numeric cell parsing. Leading/trailing spaces are
// rejected; the full cell must be consumed.

inline std::optional<double> parse_double_cell(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

/// Shortest round-trip decimal form, locale independent ("0.13", "1e+30").
inline std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, ptr);
}

inline std::optional<long long> parse_int_cell(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    long long value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc{} && ptr == last) return value;
    // Integer columns sometimes arrive as "7.0"; accept exact integral doubles.
    if (auto d = parse_double_cell(cell); d && *d == static_cast<long long>(*d)) {
        return static_cast<long long>(*d);
    }
    return std::nullopt;
}

} // namespace sinistre
