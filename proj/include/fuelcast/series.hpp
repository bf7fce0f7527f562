#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fuelcast/error.hpp"
#include "fuelcast/month.hpp"

namespace fuelcast::series {

/// Plant cost minus hub price over the months both series cover.
inline MonthSeries differential_series(const MonthSeries& plant, const MonthSeries& hub) {
    if (plant.empty() || hub.empty()) throw EmptyOverlap();
    const YearMonth first = std::max(plant.start(), hub.start());
    const YearMonth last = std::min(plant.end(), hub.end());
    if (last < first) throw EmptyOverlap();
    std::vector<std::optional<double>> out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (YearMonth m = first; m <= last; ++m) {
        auto p = plant.at(m);
        auto h = hub.at(m);
        if (!p || !h) throw IncompleteSeries(m.str());
        out.emplace_back(*p - *h);
    }
    return MonthSeries(first, std::move(out));
}

/// Natural log after adding a fixed offset: ln(x + offset_c).
/// The offset is chosen once from training data and never re-derived.
class Transform {
public:
    Transform() = default;
    explicit Transform(double offset_c) : offset_c_(offset_c) {
        if (!(offset_c >= 0.0) || !std::isfinite(offset_c)) throw ConfigError("transform offset must be >= 0");
    }

    [[nodiscard]] double offset() const { return offset_c_; }

    [[nodiscard]] double forward(double v) const { return std::log(v + offset_c_); }
    [[nodiscard]] double inverse(double v) const { return std::exp(v) - offset_c_; }
    [[nodiscard]] bool admits(double v) const { return v + offset_c_ > 0.0; }

    bool operator==(const Transform&) const = default;

private:
    double offset_c_ = 0.0;
};

/// offset_c = max(0, -min(train)) + margin.
inline Transform choose_offset(const MonthSeries& train, double margin) {
    if (!(margin > 0.0)) throw ConfigError("offset margin must be positive");
    const auto values = train.dense();
    if (values.empty()) throw TooShort("cannot choose an offset from an empty training series");
    const double lo = *std::min_element(values.begin(), values.end());
    return Transform(std::max(0.0, -lo) + margin);
}

inline MonthSeries apply_transform(const Transform& t, const MonthSeries& s) {
    MonthSeries out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i]) continue;
        if (!t.admits(*s[i])) throw NonPositiveArgument(s.month_at(i).str());
        out[i] = t.forward(*s[i]);
    }
    return out;
}

inline MonthSeries invert_transform(const Transform& t, const MonthSeries& s) {
    MonthSeries out = s;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) out[i] = t.inverse(*s[i]);
    return out;
}

/// Applies (1 - B) `d` times.
inline std::vector<double> difference(std::span<const double> s, int d) {
    if (d < 0) throw ConfigError("differencing order must be >= 0");
    if (s.size() <= static_cast<std::size_t>(d))
        throw TooShort("series of length " + std::to_string(s.size()) + " cannot be differenced " +
                       std::to_string(d) + " times");
    std::vector<double> out(s.begin(), s.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

/// Inverse of `difference`: rebuilds a series from its d-th differences and
/// its first d values (`heads`). d is taken from heads.size().
inline std::vector<double> integrate(std::span<const double> diffs, std::span<const double> heads) {
    const std::size_t d = heads.size();
    if (d == 0) return {diffs.begin(), diffs.end()};

    // starts[k] = first element of the k-th difference of the original series.
    std::vector<double> starts(d);
    {
        std::vector<double> level(heads.begin(), heads.end());
        for (std::size_t k = 0; k < d; ++k) {
            starts[k] = level.front();
            for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = level[i + 1] - level[i];
            level.pop_back();
        }
    }
    std::vector<double> cur(diffs.begin(), diffs.end());
    for (std::size_t k = d; k-- > 0;) {
        std::vector<double> up;
        up.reserve(cur.size() + 1);
        up.push_back(starts[k]);
        for (double x : cur) up.push_back(up.back() + x);
        cur = std::move(up);
    }
    return cur;
}

/// As `integrate`, with the caller's differencing order checked against the heads.
inline std::vector<double> integrate(std::span<const double> diffs, std::span<const double> heads, int d) {
    if (d < 0 || heads.size() != static_cast<std::size_t>(d))
        throw HeadMismatch("integrate: expected " + std::to_string(d) + " head values, got " +
                           std::to_string(heads.size()));
    return integrate(diffs, heads);
}

/// Extends a series forward given forecasts of its d-th differences and the
/// last d observed values (`tails`). Returns only the new level values.
inline std::vector<double> integrate_forward(std::span<const double> diff_forecasts, std::span<const double> tails) {
    const std::size_t d = tails.size();
    if (d == 0) return {diff_forecasts.begin(), diff_forecasts.end()};
    // lasts[k] = last element of the k-th difference of the observed series.
    std::vector<double> lasts(d);
    {
        std::vector<double> level(tails.begin(), tails.end());
        for (std::size_t k = 0; k < d; ++k) {
            lasts[k] = level.back();
            for (std::size_t i = 0; i + 1 < level.size(); ++i) level[i] = level[i + 1] - level[i];
            level.pop_back();
        }
    }
    std::vector<double> cur(diff_forecasts.begin(), diff_forecasts.end());
    for (std::size_t k = d; k-- > 0;) {
        double acc = lasts[k];
        for (double& x : cur) {
            acc += x;
            x = acc;
        }
    }
    return cur;
}

/// Recombines a differential forecast with a hub forecast (both in price space).
[[nodiscard]] constexpr double reconstruct_forecast(double delta_fc_forecast, double hub_forecast) {
    return delta_fc_forecast + hub_forecast;
}

}  // namespace fuelcast::series
