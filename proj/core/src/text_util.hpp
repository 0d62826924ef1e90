#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "carbosim/error.hpp"

namespace carbosim::detail {

inline std::string trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

/// Split one CSV line. Handles double-quoted fields (CodeCarbon exports
/// quote free-text cells); no multi-line fields.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

/// Iterate logical lines (LF or CRLF), skipping blank and '#' comment lines.
inline std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::string t = trim(line);
        if (!t.empty() && t[0] != '#')
            out.push_back(line);
        if (nl == std::string::npos)
            break;
        pos = nl + 1;
    }
    return out;
}

/// Strict double parse: the whole token must be consumed, value finite.
inline double parse_double(const std::string& token, const std::string& context) {
    std::string t = trim(token);
    if (t.empty())
        throw ParseError(context + ": empty numeric field");
    try {
        size_t consumed = 0;
        double v = std::stod(t, &consumed);
        if (consumed != t.size())
            throw ParseError(context + ": trailing characters in number '" + t + "'");
        if (!std::isfinite(v))
            throw ParseError(context + ": non-finite number '" + t + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError(context + ": not a number: '" + t + "'");
    } catch (const std::out_of_range&) {
        throw ParseError(context + ": number out of range: '" + t + "'");
    }
}

inline long long parse_integer(const std::string& token, const std::string& context) {
    double v = parse_double(token, context);
    long long i = static_cast<long long>(v);
    if (static_cast<double>(i) != v)
        throw ParseError(context + ": expected an integer, got '" + trim(token) + "'");
    return i;
}

/// Shortest decimal representation that parses back to exactly v.
inline std::string exact_number(double v) {
    char buf[64];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::stod(buf) == v)
            break;
    }
    return buf;
}

} // namespace carbosim::detail
