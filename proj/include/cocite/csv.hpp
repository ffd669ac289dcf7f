#pragma once

#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cocite/errors.hpp"

namespace cocite::csv {

inline std::string_view trim(std::string_view s) {
    auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Splits one delimited line into fields. A double quote at field start opens
// a quoted field; "" inside it is a literal quote. Records are read
// line-wise, so embedded newlines are not supported. Returns false on an
// unterminated quote.
inline bool split_line(std::string_view line, char delim, std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    bool in_quotes = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                cur.push_back(c);
                ++i;
            }
        } else if (c == '"' && cur.empty()) {
            in_quotes = true;
            ++i;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
            ++i;
        } else {
            cur.push_back(c);
            ++i;
        }
    }
    if (in_quotes) return false;
    fields.push_back(std::move(cur));
    return true;
}

inline bool needs_quoting(std::string_view field, char delim) {
    for (char c : field) {
        if (c == delim || c == '"' || c == '\n' || c == '\r') return true;
    }
    return false;
}

inline void append_field(std::string& out, std::string_view field, char delim) {
    if (!needs_quoting(field, delim)) {
        out.append(field);
        return;
    }
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

inline void append_row(std::string& out, std::initializer_list<std::string_view> fields,
                       char delim = ',') {
    bool first = true;
    for (auto f : fields) {
        if (!first) out.push_back(delim);
        append_field(out, f, delim);
        first = false;
    }
    out.push_back('\n');
}

// Shortest round-trip decimal form; locale-independent, so repeated runs
// produce identical artifact bytes.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    std::int64_t v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace cocite::csv
