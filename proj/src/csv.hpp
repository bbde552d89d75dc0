#pragma once

// Minimal line-oriented CSV reader shared by the panel, class-map and report
// loaders. Quoted fields may contain commas and doubled quotes but not
// newlines.

#include <charconv>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcikit/errors.hpp"

namespace gcikit::csv {

struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
    /// 1-based column of the first character of each field.
    std::vector<std::size_t> columns;
};

inline std::string location(std::string_view source, std::size_t line, std::size_t column) {
    return std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column);
}

inline Row split(std::string_view text, std::size_t line, std::string_view source) {
    Row row;
    row.line = line;
    std::size_t i = 0;
    while (true) {
        row.columns.push_back(i + 1);
        std::string field;
        if (i < text.size() && text[i] == '"') {
            ++i;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                field.push_back(text[i++]);
            }
            if (!closed) throw ParseError(location(source, line, row.columns.back()) + ": unterminated quoted field");
            if (i < text.size() && text[i] != ',') {
                throw ParseError(location(source, line, i + 1) + ": unexpected character after quoted field");
            }
        } else {
            while (i < text.size() && text[i] != ',') field.push_back(text[i++]);
        }
        row.fields.push_back(std::move(field));
        if (i >= text.size()) break;
        ++i;  // skip ','
    }
    return row;
}

/// Reads every non-blank row; lines starting with '#' are skipped when
/// `comments` is true. A trailing '\r' is stripped.
inline std::vector<Row> read(std::istream& in, std::string_view source, bool comments = true) {
    std::vector<Row> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (comments && line.front() == '#') continue;
        rows.push_back(split(line, number, source));
    }
    return rows;
}

inline std::optional<double> to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<long long> to_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::string quote(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        if (c == '\n' || c == '\r') c = ' ';
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace gcikit::csv
