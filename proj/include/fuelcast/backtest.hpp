#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fuelcast/arima.hpp"
#include "fuelcast/distfit.hpp"
#include "fuelcast/error.hpp"
#include "fuelcast/ingest.hpp"
#include "fuelcast/log.hpp"
#include "fuelcast/month.hpp"
#include "fuelcast/series.hpp"

namespace fuelcast::backtest {

using arima::ArimaFit;
using arima::ArimaSpec;
using distfit::NormalDist;
using ingest::PlantKey;
using ingest::SeriesMap;

struct BacktestConfig {
    MonthSpan train_span{YearMonth(2013, 1), YearMonth(2016, 6)};
    MonthSpan eval_span{YearMonth(2016, 7), YearMonth(2016, 12)};
    std::vector<ArimaSpec> plant_spec_grid{{2, 0, 1, true}, {2, 1, 1, true}};
    ArimaSpec hub_spec{2, 1, 1, true};
    double offset_margin = 1.0;
    bool refit_each_step = true;
    int delay_months = 3;
    bool lognormal_correction = false;
    /// Replaces both forecasts by the true month-m values. Test mode only.
    bool oracle_injection = false;
    /// Worker threads for per-plant fits; results do not depend on it.
    unsigned threads = 1;

    void validate() const {
        if (train_span.last < train_span.first) throw ConfigError("training span is empty");
        if (eval_span.last < eval_span.first) throw ConfigError("evaluation span is empty");
        if (!(train_span.last < eval_span.first))
            throw ConfigError("evaluation span " + eval_span.first.str() + ".." + eval_span.last.str() +
                              " must start after the training span ends (" + train_span.last.str() + ")");
        if (delay_months < 1) throw ConfigError("delay_months must be >= 1");
        if (!(offset_margin > 0.0)) throw ConfigError("offset_margin must be positive");
        if (plant_spec_grid.empty()) throw ConfigError("plant_spec_grid is empty");
        for (const auto& s : plant_spec_grid) s.validate();
        hub_spec.validate();
        if (eval_span.first - static_cast<std::int64_t>(delay_months) < train_span.first)
            throw ConfigError("no plant data is visible for the first evaluation month");
    }
};

struct MonthResult {
    YearMonth month;
    NormalDist real_dist{0.0, 1.0};
    NormalDist delayed_dist{0.0, 1.0};
    NormalDist forecast_dist{0.0, 1.0};
    double mean_error_delay = 0.0;     ///< |mean_delay - mean_real| / mean_real
    double mean_error_forecast = 0.0;  ///< |mean_forecast - mean_real| / mean_real
    double d_real_delay = 0.0;
    double d_real_forecast = 0.0;
    double improvement_abs = 0.0;
    std::optional<double> improvement_pct;  ///< empty when d_real_delay == 0
    std::vector<double> real_values;
    std::vector<double> delayed_values;
    std::vector<double> forecast_values;
};

struct ForecastLogEntry {
    YearMonth month;
    PlantKey plant;
    double delta_forecast = 0.0;
    double hub_forecast = 0.0;
    double fc_forecast = 0.0;
    double actual = 0.0;
};

struct DropLogEntry {
    YearMonth month;
    PlantKey plant;
    std::string reason;
};

/// Model choice fixed on the initial training window.
struct PlantModel {
    ArimaSpec spec;
    double offset = 0.0;
};

struct BacktestReport {
    std::vector<MonthResult> months;
    std::vector<ForecastLogEntry> forecasts;
    std::vector<DropLogEntry> drops;
    std::map<PlantKey, PlantModel> plant_models;
};

/// |estimate - real| / real
inline double mean_error(double estimate, double real) { return std::abs(estimate - real) / real; }

/// Builds a MonthResult's metrics from the three distributions.
inline void score(MonthResult& r) {
    const double real = r.real_dist.mu();
    r.mean_error_delay = mean_error(r.delayed_dist.mu(), real);
    r.mean_error_forecast = mean_error(r.forecast_dist.mu(), real);
    r.d_real_delay = distfit::symmetric_kl(r.real_dist, r.delayed_dist);
    r.d_real_forecast = distfit::symmetric_kl(r.real_dist, r.forecast_dist);
    r.improvement_abs = r.d_real_delay - r.d_real_forecast;
    if (r.d_real_delay != 0.0) r.improvement_pct = r.improvement_abs / r.d_real_delay;
    else r.improvement_pct.reset();
}

namespace detail {

/// Point forecast and its log-space variance at the last of `h` steps.
struct Projection {
    double value = 0.0;
    double variance = 0.0;
};

/// Forecasts `h` steps ahead with a fitted model, or by carrying the drift
/// forward when the differenced series is constant.
inline Projection project(const std::optional<ArimaFit>& model, const ArimaSpec& spec,
                          const std::vector<double>& y, std::size_t h) {
    if (model) {
        auto f = arima::forecast_with_variance(*model, y, h);
        return {f.mean.back(), f.variance.back()};
    }
    return {arima::drift_forecast(y, spec.d, h).back(), 0.0};
}

/// Fits `spec` on y. An empty optional means the drift rule applies.
inline std::optional<ArimaFit> fit_or_drift(const std::vector<double>& y, const ArimaSpec& spec) {
    try {
        return arima::fit(y, spec);
    } catch (const DegenerateSeries&) {
        return std::nullopt;
    }
}

/// Order choice by BIC. A spec whose differenced series is constant fits
/// perfectly (BIC -> -infinity) and wins outright; among several such specs
/// the usual tie-break order applies.
inline ArimaSpec choose_spec(const std::vector<double>& y, const std::vector<ArimaSpec>& grid) {
    auto sorted = grid;
    std::sort(sorted.begin(), sorted.end(), [](const ArimaSpec& a, const ArimaSpec& b) {
        return std::make_tuple(a.p + a.q + a.d, a.d, a.q, a.p) < std::make_tuple(b.p + b.q + b.d, b.d, b.q, b.p);
    });
    for (const auto& s : sorted)
        if (arima::is_degenerate(y, s.d)) return s;
    return arima::select_and_fit(y, grid).spec;
}

inline std::vector<double> log_values(const series::Transform& t, const MonthSeries& s) {
    return series::apply_transform(t, s).dense();
}

inline double back_transform(const series::Transform& t, const Projection& p, bool lognormal_correction) {
    return t.inverse(lognormal_correction ? p.value + 0.5 * p.variance : p.value);
}

struct PlantState {
    PlantKey key;
    const MonthSeries* series = nullptr;
    std::optional<PlantModel> model;
    std::optional<ArimaFit> frozen;  ///< used when parameters are not refitted
    std::string setup_error;
};

struct PlantOutcome {
    std::optional<ForecastLogEntry> entry;
    std::string error;
};

}  // namespace detail

/// Runs the expanding-window experiment.
///
/// For each evaluation month m, plant data through m - delay_months and hub
/// prices through m - 1 are visible. Per plant, the differential
/// (plant - hub) is log-transformed with an offset frozen on the initial
/// window, forecast delay_months steps to m with the order picked by BIC on
/// the initial window, and added to a one-step forecast of the log hub
/// price. The cross-plant forecasts, the month-m actuals and the
/// month-(m - delay) actuals are each fitted to a normal distribution and
/// compared by symmetric KL divergence.
inline BacktestReport run_backtest(const SeriesMap& plants, const MonthSeries& hub, const BacktestConfig& cfg) {
    cfg.validate();
    const YearMonth first = cfg.train_span.first;
    const YearMonth last = cfg.eval_span.last;
    const auto delay = static_cast<std::int64_t>(cfg.delay_months);

    if (plants.empty()) throw DataError("no plants to backtest");
    if (!hub.covers(first) || !hub.covers(last))
        throw DataError("hub series does not cover " + first.str() + ".." + last.str());
    for (YearMonth m = first; m <= last; ++m)
        if (!hub.at(m)) throw IncompleteSeries("hub " + m.str());
    for (const auto& [key, s] : plants) {
        for (YearMonth m = first; m <= last; ++m)
            if (!s.at(m)) throw IncompleteSeries("plant " + ingest::to_string(key) + " " + m.str());
    }

    const series::Transform hub_transform(0.0);
    const YearMonth plant_init_end = std::min(cfg.train_span.last, cfg.eval_span.first - delay);
    const YearMonth hub_init_end = std::min(cfg.train_span.last, cfg.eval_span.first - 1);

    BacktestReport report;

    // Per-plant setup on the initial window: offset, order, optional frozen fit.
    std::vector<detail::PlantState> states;
    for (const auto& [key, s] : plants) {
        detail::PlantState st;
        st.key = key;
        st.series = &s;
        if (!cfg.oracle_injection) {
            try {
                const auto delta = series::differential_series(s.slice(first, plant_init_end),
                                                               hub.slice(first, plant_init_end));
                PlantModel pm;
                pm.offset = series::choose_offset(delta, cfg.offset_margin).offset();
                const auto y = detail::log_values(series::Transform(pm.offset), delta);
                pm.spec = detail::choose_spec(y, cfg.plant_spec_grid);
                if (!cfg.refit_each_step) st.frozen = detail::fit_or_drift(y, pm.spec);
                st.model = pm;
                report.plant_models.emplace(key, pm);
            } catch (const Error& e) {
                st.setup_error = std::string("model setup failed: ") + e.what();
                log::warn("plant " + ingest::to_string(key) + ": " + st.setup_error);
            }
        }
        states.push_back(std::move(st));
    }

    std::optional<ArimaFit> hub_frozen;
    if (!cfg.refit_each_step && !cfg.oracle_injection)
        hub_frozen = detail::fit_or_drift(detail::log_values(hub_transform, hub.slice(first, hub_init_end)),
                                          cfg.hub_spec);

    for (YearMonth m = cfg.eval_span.first; m <= cfg.eval_span.last; ++m) {
        const YearMonth plant_visible = m - delay;
        const YearMonth hub_visible = m - 1;

        // Hub: one step ahead from data through m - 1.
        double hub_fc = 0.0;
        if (cfg.oracle_injection) {
            hub_fc = *hub.at(m);
        } else {
            try {
                const auto y = detail::log_values(hub_transform, hub.slice(first, hub_visible));
                const auto model = cfg.refit_each_step ? detail::fit_or_drift(y, cfg.hub_spec) : hub_frozen;
                hub_fc = detail::back_transform(hub_transform, detail::project(model, cfg.hub_spec, y, 1),
                                                cfg.lognormal_correction);
            } catch (const Error& e) {
                throw NumericalError("month " + m.str() + ": hub forecast failed: " + e.what());
            }
        }

        auto run_plant = [&](const detail::PlantState& st) -> detail::PlantOutcome {
            detail::PlantOutcome out;
            ForecastLogEntry entry;
            entry.month = m;
            entry.plant = st.key;
            entry.actual = *st.series->at(m);
            entry.hub_forecast = hub_fc;
            if (cfg.oracle_injection) {
                entry.delta_forecast = entry.actual - *hub.at(m);
            } else {
                if (!st.model) {
                    out.error = st.setup_error;
                    return out;
                }
                try {
                    const series::Transform t(st.model->offset);
                    const auto delta = series::differential_series(st.series->slice(first, plant_visible),
                                                                   hub.slice(first, plant_visible));
                    const auto y = detail::log_values(t, delta);
                    const auto model = cfg.refit_each_step ? detail::fit_or_drift(y, st.model->spec) : st.frozen;
                    const auto proj = detail::project(model, st.model->spec, y, static_cast<std::size_t>(delay));
                    entry.delta_forecast = detail::back_transform(t, proj, cfg.lognormal_correction);
                } catch (const Error& e) {
                    out.error = e.what();
                    return out;
                }
            }
            entry.fc_forecast = series::reconstruct_forecast(entry.delta_forecast, entry.hub_forecast);
            if (!std::isfinite(entry.fc_forecast)) {
                out.error = "non-finite forecast";
                return out;
            }
            out.entry = entry;
            return out;
        };

        std::vector<detail::PlantOutcome> outcomes(states.size());
        if (cfg.threads > 1 && states.size() > 1) {
            const std::size_t workers = std::min<std::size_t>(cfg.threads, states.size());
            std::vector<std::future<void>> jobs;
            for (std::size_t w = 0; w < workers; ++w)
                jobs.push_back(std::async(std::launch::async, [&, w] {
                    for (std::size_t i = w; i < states.size(); i += workers) outcomes[i] = run_plant(states[i]);
                }));
            for (auto& j : jobs) j.get();
        } else {
            for (std::size_t i = 0; i < states.size(); ++i) outcomes[i] = run_plant(states[i]);
        }

        MonthResult r;
        r.month = m;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& st = states[i];
            r.real_values.push_back(*st.series->at(m));
            r.delayed_values.push_back(*st.series->at(plant_visible));
            if (outcomes[i].entry) {
                r.forecast_values.push_back(outcomes[i].entry->fc_forecast);
                report.forecasts.push_back(*outcomes[i].entry);
            } else {
                if (st.model) log::warn("month " + m.str() + " plant " + ingest::to_string(st.key) + " dropped: " +
                                        outcomes[i].error);
                report.drops.push_back({m, st.key, outcomes[i].error});
            }
        }
        if (r.forecast_values.empty()) throw AllFitsFailed("month " + m.str() + ": every plant forecast failed");
        try {
            r.real_dist = distfit::fit_normal(r.real_values);
            r.delayed_dist = distfit::fit_normal(r.delayed_values);
            r.forecast_dist = distfit::fit_normal(r.forecast_values);
        } catch (const Error& e) {
            throw NumericalError("month " + m.str() + ": " + e.what());
        }
        score(r);
        report.months.push_back(std::move(r));
    }
    return report;
}

}  // namespace fuelcast::backtest
