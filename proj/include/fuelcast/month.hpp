#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuelcast/error.hpp"

namespace fuelcast {

/// A calendar month. Stored as a running month count so arithmetic is plain
/// integer arithmetic and December rolls into January of the next year.
class YearMonth {
public:
    constexpr YearMonth() = default;
    constexpr YearMonth(int year, int month) : index_(year * 12 + (month - 1)) {}

    [[nodiscard]] static constexpr YearMonth from_index(std::int64_t index) {
        YearMonth ym;
        ym.index_ = index;
        return ym;
    }

    /// Accepts YYYYMM, YYYY-MM and YYYY-MM-DD. Returns nullopt on anything else.
    [[nodiscard]] static std::optional<YearMonth> parse(std::string_view text) {
        auto digits = [](std::string_view s, int& out) {
            if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
                return false;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            return ec == std::errc{} && ptr == s.data() + s.size();
        };
        int year = 0;
        int month = 0;
        if (text.size() == 6) {
            if (!digits(text.substr(0, 4), year) || !digits(text.substr(4, 2), month)) return std::nullopt;
        } else if ((text.size() == 7 || text.size() == 10) && text[4] == '-') {
            if (!digits(text.substr(0, 4), year) || !digits(text.substr(5, 2), month)) return std::nullopt;
            if (text.size() == 10) {
                int day = 0;
                if (text[7] != '-' || !digits(text.substr(8, 2), day) || day < 1 || day > 31) return std::nullopt;
            }
        } else {
            return std::nullopt;
        }
        if (month < 1 || month > 12) return std::nullopt;
        return YearMonth(year, month);
    }

    [[nodiscard]] constexpr int year() const {
        return static_cast<int>(index_ >= 0 ? index_ / 12 : (index_ - 11) / 12);
    }
    [[nodiscard]] constexpr int month() const { return static_cast<int>(index_ - std::int64_t{year()} * 12) + 1; }
    [[nodiscard]] constexpr std::int64_t index() const { return index_; }

    /// YYYYMM, the form used throughout the CSV schemas.
    [[nodiscard]] std::string str() const {
        std::string m = std::to_string(month());
        return std::to_string(year()) + (m.size() == 1 ? "0" + m : m);
    }

    [[nodiscard]] constexpr YearMonth operator+(std::int64_t months) const { return from_index(index_ + months); }
    [[nodiscard]] constexpr YearMonth operator-(std::int64_t months) const { return from_index(index_ - months); }
    [[nodiscard]] constexpr std::int64_t operator-(YearMonth other) const { return index_ - other.index_; }
    constexpr YearMonth& operator++() {
        ++index_;
        return *this;
    }

    constexpr auto operator<=>(const YearMonth&) const = default;

private:
    std::int64_t index_ = 0;
};

/// Inclusive month range.
struct MonthSpan {
    YearMonth first;
    YearMonth last;

    [[nodiscard]] constexpr std::size_t length() const {
        return last < first ? 0 : static_cast<std::size_t>(last - first + 1);
    }
    [[nodiscard]] constexpr bool contains(YearMonth m) const { return first <= m && m <= last; }
    constexpr bool operator==(const MonthSpan&) const = default;
};

/// Parses "YYYYMM:YYYYMM" (also accepts '-' between two YYYYMM tokens).
inline std::optional<MonthSpan> parse_span(std::string_view text) {
    auto sep = text.find(':');
    if (sep == std::string_view::npos && text.size() == 13 && text[6] == '-') sep = 6;
    if (sep == std::string_view::npos) return std::nullopt;
    auto a = YearMonth::parse(text.substr(0, sep));
    auto b = YearMonth::parse(text.substr(sep + 1));
    if (!a || !b || *b < *a) return std::nullopt;
    return MonthSpan{*a, *b};
}

/// Contiguous calendar-month series; absent values are gaps.
class MonthSeries {
public:
    MonthSeries() = default;
    MonthSeries(YearMonth start, std::vector<std::optional<double>> values)
        : start_(start), values_(std::move(values)) {}

    /// Complete series from plain values.
    static MonthSeries from_values(YearMonth start, std::span<const double> values) {
        return MonthSeries(start, std::vector<std::optional<double>>(values.begin(), values.end()));
    }
    static MonthSeries from_values(YearMonth start, std::initializer_list<double> values) {
        return from_values(start, std::span<const double>(values.begin(), values.size()));
    }

    [[nodiscard]] YearMonth start() const { return start_; }
    /// Last covered month. Undefined for an empty series.
    [[nodiscard]] YearMonth end() const { return start_ + static_cast<std::int64_t>(values_.size()) - 1; }
    [[nodiscard]] MonthSpan span() const { return {start_, end()}; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] bool empty() const { return values_.empty(); }

    [[nodiscard]] const std::vector<std::optional<double>>& values() const { return values_; }
    [[nodiscard]] const std::optional<double>& operator[](std::size_t i) const { return values_[i]; }
    std::optional<double>& operator[](std::size_t i) { return values_[i]; }

    [[nodiscard]] YearMonth month_at(std::size_t i) const { return start_ + static_cast<std::int64_t>(i); }
    [[nodiscard]] bool covers(YearMonth m) const { return !empty() && start_ <= m && m <= end(); }

    /// Value at a calendar month; nullopt when outside the span or a gap.
    [[nodiscard]] std::optional<double> at(YearMonth m) const {
        if (!covers(m)) return std::nullopt;
        return values_[static_cast<std::size_t>(m - start_)];
    }

    [[nodiscard]] std::size_t missing_count() const {
        return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::nullopt));
    }
    [[nodiscard]] bool complete() const { return missing_count() == 0; }

    /// Longest run of consecutive gaps.
    [[nodiscard]] std::size_t longest_gap_run() const {
        std::size_t best = 0;
        std::size_t run = 0;
        for (const auto& v : values_) {
            run = v ? 0 : run + 1;
            best = std::max(best, run);
        }
        return best;
    }

    /// Sub-series over [first, last] intersected with this span.
    [[nodiscard]] MonthSeries slice(YearMonth first, YearMonth last) const {
        if (empty()) return {};
        const YearMonth lo = std::max(first, start_);
        const YearMonth hi = std::min(last, end());
        if (hi < lo) return MonthSeries(lo, {});
        auto b = values_.begin() + (lo - start_);
        auto e = values_.begin() + (hi - start_) + 1;
        return MonthSeries(lo, std::vector<std::optional<double>>(b, e));
    }

    /// Plain values; throws IncompleteSeries at the first gap.
    [[nodiscard]] std::vector<double> dense() const {
        std::vector<double> out;
        out.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!values_[i]) throw IncompleteSeries(month_at(i).str());
            out.push_back(*values_[i]);
        }
        return out;
    }

    bool operator==(const MonthSeries&) const = default;

private:
    YearMonth start_;
    std::vector<std::optional<double>> values_;
};

}  // namespace fuelcast
