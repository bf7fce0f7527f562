#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fuelcast/backtest.hpp"
#include "fuelcast/csv.hpp"
#include "fuelcast/error.hpp"

namespace fuelcast::report {

struct Document {
    std::string name;
    std::string content;
};

struct FiveNumber {
    std::size_t count = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Quantile by linear interpolation between order statistics (R type 7).
inline double quantile(std::span<const double> sorted, double prob) {
    if (sorted.empty()) return std::nan("");
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline FiveNumber five_number(std::vector<double> values) {
    FiveNumber f;
    f.count = values.size();
    if (values.empty()) return f;
    std::sort(values.begin(), values.end());
    f.min = values.front();
    f.q1 = quantile(values, 0.25);
    f.median = quantile(values, 0.5);
    f.q3 = quantile(values, 0.75);
    f.max = values.back();
    return f;
}

/// Percentage of a fraction, one decimal, with a trailing '%'.
inline std::string percent(double fraction) { return csv::fixed(100.0 * fraction, 1) + "%"; }

/// Mean error table: Month, Mean_real, Mean_delay, Error_delay, Mean_forecast, Error_forecast.
inline std::string mean_error_table(const backtest::BacktestReport& r) {
    std::ostringstream os;
    os << "Month,Mean_real,Mean_delay,Error_delay,Mean_forecast,Error_forecast\n";
    for (const auto& m : r.months)
        os << m.month.str() << ',' << csv::fixed(m.real_dist.mu(), 2) << ',' << csv::fixed(m.delayed_dist.mu(), 2)
           << ',' << percent(m.mean_error_delay) << ',' << csv::fixed(m.forecast_dist.mu(), 2) << ','
           << percent(m.mean_error_forecast) << '\n';
    return os.str();
}

/// Divergence table: Month, D_real_delay, D_real_forecast, Improve_abs, Improve_pct.
inline std::string divergence_table(const backtest::BacktestReport& r) {
    std::ostringstream os;
    os << "Month,D_real_delay,D_real_forecast,Improve_abs,Improve_pct\n";
    for (const auto& m : r.months)
        os << m.month.str() << ',' << csv::fixed(m.d_real_delay, 2) << ',' << csv::fixed(m.d_real_forecast, 2) << ','
           << csv::fixed(m.improvement_abs, 2) << ',' << (m.improvement_pct ? percent(*m.improvement_pct) : "")
           << '\n';
    return os.str();
}

inline std::string distributions_csv(const backtest::BacktestReport& r) {
    std::ostringstream os;
    os << "Month,Which,Mu,Sigma\n";
    for (const auto& m : r.months) {
        const std::pair<const char*, const distfit::NormalDist*> rows[] = {
            {"real", &m.real_dist}, {"delay", &m.delayed_dist}, {"forecast", &m.forecast_dist}};
        for (const auto& [which, d] : rows)
            os << m.month.str() << ',' << which << ',' << csv::full(d->mu()) << ',' << csv::full(d->sigma()) << '\n';
    }
    return os.str();
}

inline std::string boxstats_csv(const backtest::BacktestReport& r) {
    std::ostringstream os;
    os << "Month,Which,Count,Min,Q1,Median,Q3,Max\n";
    for (const auto& m : r.months) {
        const std::pair<const char*, const std::vector<double>*> rows[] = {
            {"real", &m.real_values}, {"delay", &m.delayed_values}, {"forecast", &m.forecast_values}};
        for (const auto& [which, v] : rows) {
            const auto f = five_number(*v);
            os << m.month.str() << ',' << which << ',' << f.count << ',' << csv::full(f.min) << ','
               << csv::full(f.q1) << ',' << csv::full(f.median) << ',' << csv::full(f.q3) << ','
               << csv::full(f.max) << '\n';
        }
    }
    return os.str();
}

inline std::string forecast_log_csv(const backtest::BacktestReport& r) {
    std::ostringstream os;
    os << "Month,PlantID,DeltaForecast,HubForecast,FCForecast,Actual\n";
    for (const auto& f : r.forecasts)
        os << f.month.str() << ',' << f.plant.plant_id << ',' << csv::full(f.delta_forecast) << ','
           << csv::full(f.hub_forecast) << ',' << csv::full(f.fc_forecast) << ',' << csv::full(f.actual) << '\n';
    return os.str();
}

inline std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string drops_csv(const backtest::BacktestReport& r) {
    std::ostringstream os;
    os << "Month,PlantID,State,Source,Reason\n";
    for (const auto& d : r.drops)
        os << d.month.str() << ',' << d.plant.plant_id << ',' << d.plant.state << ',' << d.plant.source << ','
           << quote(d.reason) << '\n';
    return os.str();
}

/// All report files for a backtest run, in a fixed order.
inline std::vector<Document> emit_tables(const backtest::BacktestReport& r) {
    if (r.months.empty()) throw DataError("cannot render an empty backtest report");
    return {{"table3.csv", mean_error_table(r)},      {"table4.csv", divergence_table(r)},
            {"distributions.csv", distributions_csv(r)}, {"boxstats.csv", boxstats_csv(r)},
            {"forecast_log.csv", forecast_log_csv(r)},   {"drops.csv", drops_csv(r)}};
}

}  // namespace fuelcast::report
