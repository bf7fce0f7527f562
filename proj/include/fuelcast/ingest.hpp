#pragma once

#include <compare>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fuelcast/csv.hpp"
#include "fuelcast/error.hpp"
#include "fuelcast/log.hpp"
#include "fuelcast/month.hpp"

namespace fuelcast::ingest {

/// One row of a plant fuel-receipts extract.
struct FuelRecord {
    YearMonth date;
    long long plant_id = 0;
    std::string state;
    std::string source;
    double quantity = 0.0;          ///< tons or Mcf
    double avg_heat_content = 0.0;  ///< MMBtu per physical unit
    double fuel_cost = 0.0;         ///< $/MMBtu

    bool operator==(const FuelRecord&) const = default;
};

struct PlantKey {
    long long plant_id = 0;
    std::string state;
    std::string source;

    auto operator<=>(const PlantKey&) const = default;
    bool operator==(const PlantKey&) const = default;
};

inline std::string to_string(const PlantKey& k) {
    return std::to_string(k.plant_id) + "/" + k.state + "/" + k.source;
}

using AggregateMap = std::map<std::pair<PlantKey, YearMonth>, double>;
using SeriesMap = std::map<PlantKey, MonthSeries>;

/// Parses a `Date,PlantID,State,Source,Quantity,AvgHeatContent,FuelCost` extract.
inline std::vector<FuelRecord> parse_records(std::istream& in) {
    csv::Reader reader(in);
    if (!reader.has_header()) throw MissingColumn("Date");
    const auto c_date = reader.column("Date");
    const auto c_plant = reader.column("PlantID");
    const auto c_state = reader.column("State");
    const auto c_source = reader.column("Source");
    const auto c_qty = reader.column("Quantity");
    const auto c_ahc = reader.column("AvgHeatContent");
    const auto c_fc = reader.column("FuelCost");

    std::vector<FuelRecord> out;
    std::vector<std::string> row;
    while (reader.next(row)) {
        const auto line = reader.line();
        FuelRecord r;
        const auto& d = row[c_date];
        auto date = d.size() == 6 ? YearMonth::parse(d) : std::nullopt;
        if (!date) throw MalformedRow(line, "bad date '" + d + "' (expected YYYYMM)");
        r.date = *date;

        auto plant = csv::parse_int(row[c_plant]);
        if (!plant || *plant <= 0) throw MalformedRow(line, "bad plant id '" + row[c_plant] + "'");
        r.plant_id = *plant;

        r.state = row[c_state];
        r.source = row[c_source];
        if (r.state.empty()) throw MalformedRow(line, "empty state");
        if (r.source.empty()) throw MalformedRow(line, "empty energy source");

        auto qty = csv::parse_double(row[c_qty]);
        if (!qty || *qty < 0.0) throw MalformedRow(line, "bad quantity '" + row[c_qty] + "'");
        auto ahc = csv::parse_double(row[c_ahc]);
        if (!ahc || *ahc <= 0.0) throw MalformedRow(line, "bad average heat content '" + row[c_ahc] + "'");
        auto fc = csv::parse_double(row[c_fc]);
        if (!fc) throw MalformedRow(line, "bad fuel cost '" + row[c_fc] + "'");
        r.quantity = *qty;
        r.avg_heat_content = *ahc;
        r.fuel_cost = *fc;
        out.push_back(std::move(r));
    }
    return out;
}

/// Heat-weighted monthly fuel cost per (plant, month):
/// sum(Q*AHC*FC) / sum(Q*AHC). Groups with zero total heat are skipped.
inline AggregateMap aggregate_fuel_cost(const std::vector<FuelRecord>& records) {
    struct Totals {
        double cost = 0.0;
        double heat = 0.0;
    };
    std::map<std::pair<PlantKey, YearMonth>, Totals> groups;
    for (const auto& r : records) {
        auto& t = groups[{PlantKey{r.plant_id, r.state, r.source}, r.date}];
        const double heat = r.quantity * r.avg_heat_content;
        t.cost += heat * r.fuel_cost;
        t.heat += heat;
    }
    AggregateMap out;
    for (const auto& [key, t] : groups) {
        if (t.heat == 0.0) {
            log::warn("plant " + to_string(key.first) + " month " + key.second.str() +
                      " has zero total heat; skipped");
            continue;
        }
        out.emplace(key, t.cost / t.heat);
    }
    return out;
}

/// Distinct plant keys present in an aggregation, optionally restricted to a span.
inline std::set<PlantKey> plant_keys(const AggregateMap& agg) {
    std::set<PlantKey> keys;
    for (const auto& [k, v] : agg) keys.insert(k.first);
    return keys;
}

inline MonthSeries build_plant_series(const AggregateMap& agg, const PlantKey& key, MonthSpan span) {
    std::vector<std::optional<double>> values(span.length());
    auto it = agg.lower_bound({key, span.first});
    for (; it != agg.end() && it->first.first == key && it->first.second <= span.last; ++it)
        values[static_cast<std::size_t>(it->first.second - span.first)] = it->second;
    return MonthSeries(span.first, std::move(values));
}

/// Fills interior gaps of length exactly one with the mean of the two neighbours.
inline MonthSeries interpolate_single_gaps(const MonthSeries& series) {
    MonthSeries out = series;
    for (std::size_t k = 1; k + 1 < series.size(); ++k) {
        if (!series[k] && series[k - 1] && series[k + 1]) out[k] = (*series[k - 1] + *series[k + 1]) / 2.0;
    }
    return out;
}

struct InclusionPolicy {
    std::size_t max_total_missing = 2;
    std::size_t max_gap_run = 1;
};

struct DropEntry {
    PlantKey plant;
    std::string reason;
};

struct FilterResult {
    SeriesMap retained;
    std::vector<DropEntry> drops;
};

/// Applies the plant-inclusion policy, then interpolates single gaps. Plants
/// still incomplete after interpolation (e.g. a gap at either end) are dropped.
inline FilterResult filter_plants(const SeriesMap& series_map, const InclusionPolicy& policy) {
    FilterResult result;
    for (const auto& [key, series] : series_map) {
        const auto missing = series.missing_count();
        const auto run = series.longest_gap_run();
        if (missing > policy.max_total_missing) {
            result.drops.push_back({key, "missing " + std::to_string(missing) + " months (max " +
                                             std::to_string(policy.max_total_missing) + ")"});
            continue;
        }
        if (run > policy.max_gap_run) {
            result.drops.push_back({key, "gap run of " + std::to_string(run) + " months (max " +
                                             std::to_string(policy.max_gap_run) + ")"});
            continue;
        }
        auto repaired = interpolate_single_gaps(series);
        if (!repaired.complete()) {
            result.drops.push_back({key, "gap at series boundary cannot be interpolated"});
            continue;
        }
        result.retained.emplace(key, std::move(repaired));
    }
    return result;
}

/// Reads `Date,Price` rows. With `aggregate_daily`, every month's value is the
/// arithmetic mean of its rows; otherwise each month must appear exactly once.
inline MonthSeries load_hub_prices(std::istream& in, bool aggregate_daily) {
    csv::Reader reader(in);
    if (!reader.has_header()) throw MissingColumn("Date");
    const auto c_date = reader.column("Date");
    const auto c_price = reader.column("Price");

    std::map<YearMonth, std::pair<double, int>> sums;
    std::vector<std::string> row;
    while (reader.next(row)) {
        const auto line = reader.line();
        auto date = YearMonth::parse(row[c_date]);
        if (!date) throw MalformedRow(line, "bad date '" + row[c_date] + "'");
        auto price = csv::parse_double(row[c_price]);
        if (!price) throw MalformedRow(line, "bad price '" + row[c_price] + "'");
        auto& [sum, count] = sums[*date];
        if (count > 0 && !aggregate_daily)
            throw MalformedRow(line, "duplicate month " + date->str() + " (enable daily aggregation)");
        sum += *price;
        ++count;
    }
    if (sums.empty()) return {};

    const YearMonth first = sums.begin()->first;
    const YearMonth last = sums.rbegin()->first;
    std::vector<std::optional<double>> values;
    for (YearMonth m = first; m <= last; ++m) {
        auto it = sums.find(m);
        if (it == sums.end()) throw IncompleteHub(m.str());
        values.emplace_back(it->second.first / it->second.second);
    }
    return MonthSeries(first, std::move(values));
}

}  // namespace fuelcast::ingest
