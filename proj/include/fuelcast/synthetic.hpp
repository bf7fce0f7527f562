#pragma once

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fuelcast/arima/simulate.hpp"
#include "fuelcast/csv.hpp"
#include "fuelcast/ingest.hpp"
#include "fuelcast/month.hpp"

// Synthetic datasets for tests and demonstrations.

namespace fuelcast::synthetic {

struct Dataset {
    ingest::SeriesMap plants;
    MonthSeries hub;
};

struct RampWorldOptions {
    std::size_t plants = 29;
    YearMonth start{2013, 1};
    std::size_t months = 48;  ///< 42 training + 6 evaluation
    double hub_start = 2.0;
    double hub_slope = 0.05;  ///< $/MMBtu per month
    double spread_min = 0.1;  ///< smallest plant premium over the hub
    double spread_step = 0.05;
    std::string state = "TX";
    std::string source = "NG";
};

/// Hub follows a deterministic linear ramp; every plant is the hub plus a
/// plant-specific constant, so each plant-minus-hub differential is constant.
inline Dataset ramp_world(const RampWorldOptions& opt = {}) {
    Dataset ds;
    std::vector<double> hub(opt.months);
    for (std::size_t t = 0; t < opt.months; ++t) hub[t] = opt.hub_start + opt.hub_slope * static_cast<double>(t);
    ds.hub = MonthSeries::from_values(opt.start, hub);
    for (std::size_t i = 0; i < opt.plants; ++i) {
        const double premium = opt.spread_min + opt.spread_step * static_cast<double>(i);
        std::vector<double> v(opt.months);
        for (std::size_t t = 0; t < opt.months; ++t) v[t] = hub[t] + premium;
        ds.plants.emplace(ingest::PlantKey{static_cast<long long>(100 + i), opt.state, opt.source},
                          MonthSeries::from_values(opt.start, v));
    }
    return ds;
}

struct NoisyWorldOptions {
    std::size_t plants = 29;
    YearMonth start{2013, 1};
    std::size_t months = 48;
    std::string state = "TX";
    std::string source = "NG";
};

/// Stochastic world: log hub follows an ARIMA(2,1,1) with small innovations;
/// each plant is hub plus a premium that follows its own AR(1) around a
/// plant-specific level.
inline Dataset noisy_world(std::uint64_t seed, const NoisyWorldOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    Dataset ds;
    arima::ArimaFit hub_model;
    hub_model.spec = {2, 1, 1, true};
    hub_model.phi = {0.4, -0.2};
    hub_model.theta = {0.3};
    hub_model.mu = 0.004;
    hub_model.sigma2 = 0.06 * 0.06;
    auto log_hub = arima::simulate(hub_model, opt.months, rng);
    std::vector<double> hub(opt.months);
    for (std::size_t t = 0; t < opt.months; ++t) hub[t] = 3.0 * std::exp(log_hub[t]);
    ds.hub = MonthSeries::from_values(opt.start, hub);

    std::uniform_real_distribution<double> level(0.1, 1.2);
    std::uniform_real_distribution<double> persistence(0.3, 0.8);
    for (std::size_t i = 0; i < opt.plants; ++i) {
        arima::ArimaFit premium;
        premium.spec = {1, 0, 0, true};
        premium.phi = {persistence(rng)};
        premium.mu = level(rng) * (1.0 - premium.phi[0]);
        premium.sigma2 = 0.05 * 0.05;
        auto prem = arima::simulate(premium, opt.months, rng);
        std::vector<double> v(opt.months);
        for (std::size_t t = 0; t < opt.months; ++t) v[t] = hub[t] + prem[t];
        ds.plants.emplace(ingest::PlantKey{static_cast<long long>(100 + i), opt.state, opt.source},
                          MonthSeries::from_values(opt.start, v));
    }
    return ds;
}

/// Plant-records CSV with one record per plant-month (Q = 1, AHC = 1), so
/// aggregation reproduces the series values exactly. Gaps are skipped.
inline std::string records_csv(const ingest::SeriesMap& plants) {
    std::ostringstream os;
    os << "Date,PlantID,State,Source,Quantity,AvgHeatContent,FuelCost\n";
    for (const auto& [key, s] : plants)
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i])
                os << s.month_at(i).str() << ',' << key.plant_id << ',' << key.state << ',' << key.source
                   << ",1,1," << csv::full(*s[i]) << '\n';
    return os.str();
}

inline std::string hub_csv(const MonthSeries& hub) {
    std::ostringstream os;
    os << "Date,Price\n";
    for (std::size_t i = 0; i < hub.size(); ++i)
        if (hub[i]) os << hub.month_at(i).str() << ',' << csv::full(*hub[i]) << '\n';
    return os.str();
}

}  // namespace fuelcast::synthetic
