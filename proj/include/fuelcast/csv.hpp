#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fuelcast/error.hpp"

namespace fuelcast::csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits one CSV record. Double-quoted fields may contain commas; "" escapes a quote.
inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.emplace_back(trim(cur));
    return fields;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Header-indexed reader. Column lookup is case-insensitive; blank lines are skipped.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (trim(line).empty()) continue;
            if (line_no_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
            header_ = split(line);
            for (std::size_t i = 0; i < header_.size(); ++i) index_[lower(header_[i])] = i;
            return;
        }
    }

    [[nodiscard]] bool has_header() const { return !header_.empty(); }

    [[nodiscard]] std::size_t column(const std::string& name) const {
        auto it = index_.find(lower(name));
        if (it == index_.end()) throw MissingColumn(name);
        return it->second;
    }

    [[nodiscard]] std::optional<std::size_t> find_column(const std::string& name) const {
        auto it = index_.find(lower(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }

    /// Reads the next non-blank row. Rows shorter than the header are malformed.
    bool next(std::vector<std::string>& row) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (trim(line).empty()) continue;
            row = split(line);
            if (row.size() < header_.size())
                throw MalformedRow(line_no_, "expected " + std::to_string(header_.size()) + " fields, got " +
                                                 std::to_string(row.size()));
            return true;
        }
        return false;
    }

    [[nodiscard]] std::size_t line() const { return line_no_; }

private:
    static std::string lower(std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    }

    std::istream& in_;
    std::size_t line_no_ = 0;
    std::vector<std::string> header_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Shortest round-trip representation of a double ("%.17g" trimmed by to_chars).
inline std::string full(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Fixed-point formatting for display tables.
inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

}  // namespace fuelcast::csv
