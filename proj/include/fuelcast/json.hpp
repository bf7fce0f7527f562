#pragma once

#include <json.hpp>

#include "fuelcast/arima/spec.hpp"
#include "fuelcast/backtest.hpp"
#include "fuelcast/distfit.hpp"
#include "fuelcast/ingest.hpp"
#include "fuelcast/month.hpp"

// nlohmann/json bindings for the persisted types.

namespace fuelcast {

inline void to_json(nlohmann::json& j, const YearMonth& m) { j = m.str(); }
inline void from_json(const nlohmann::json& j, YearMonth& m) {
    auto parsed = YearMonth::parse(j.get<std::string>());
    if (!parsed) throw DataError("bad month '" + j.get<std::string>() + "'");
    m = *parsed;
}

}  // namespace fuelcast

namespace fuelcast::arima {

inline void to_json(nlohmann::json& j, const ArimaSpec& s) {
    j = {{"p", s.p}, {"d", s.d}, {"q", s.q}, {"with_constant", s.with_constant}};
}
inline void from_json(const nlohmann::json& j, ArimaSpec& s) {
    j.at("p").get_to(s.p);
    j.at("d").get_to(s.d);
    j.at("q").get_to(s.q);
    s.with_constant = j.value("with_constant", true);
    s.validate();
}

inline void to_json(nlohmann::json& j, const ArimaFit& f) {
    j = {{"spec", f.spec}, {"phi", f.phi},     {"theta", f.theta}, {"mu", f.mu}, {"mean", f.mean()},
         {"sigma2", f.sigma2}, {"loglik", f.loglik}, {"bic", f.bic},  {"n_eff", f.n_eff}};
}
inline void from_json(const nlohmann::json& j, ArimaFit& f) {
    j.at("spec").get_to(f.spec);
    j.at("phi").get_to(f.phi);
    j.at("theta").get_to(f.theta);
    j.at("mu").get_to(f.mu);
    j.at("sigma2").get_to(f.sigma2);
    j.at("loglik").get_to(f.loglik);
    j.at("bic").get_to(f.bic);
    j.at("n_eff").get_to(f.n_eff);
    if (f.phi.size() != static_cast<std::size_t>(f.spec.p) || f.theta.size() != static_cast<std::size_t>(f.spec.q))
        throw DataError("ARIMA fit coefficient counts do not match its spec");
}

}  // namespace fuelcast::arima

namespace fuelcast::distfit {

inline void to_json(nlohmann::json& j, const NormalDist& d) { j = {{"mu", d.mu()}, {"sigma", d.sigma()}}; }

inline NormalDist normal_from_json(const nlohmann::json& j) {
    return {j.at("mu").get<double>(), j.at("sigma").get<double>()};
}

}  // namespace fuelcast::distfit

namespace fuelcast::ingest {

inline void to_json(nlohmann::json& j, const PlantKey& k) {
    j = {{"plant_id", k.plant_id}, {"state", k.state}, {"source", k.source}};
}
inline void from_json(const nlohmann::json& j, PlantKey& k) {
    j.at("plant_id").get_to(k.plant_id);
    j.at("state").get_to(k.state);
    j.at("source").get_to(k.source);
}

}  // namespace fuelcast::ingest

namespace fuelcast::backtest {

inline nlohmann::json report_to_json(const BacktestReport& r) {
    nlohmann::json months = nlohmann::json::array();
    for (const auto& m : r.months) {
        nlohmann::json jm = {{"month", m.month},
                             {"real_dist", m.real_dist},
                             {"delayed_dist", m.delayed_dist},
                             {"forecast_dist", m.forecast_dist},
                             {"mean_error_delay", m.mean_error_delay},
                             {"mean_error_forecast", m.mean_error_forecast},
                             {"d_real_delay", m.d_real_delay},
                             {"d_real_forecast", m.d_real_forecast},
                             {"improvement_abs", m.improvement_abs},
                             {"improvement_pct", nullptr},
                             {"real_values", m.real_values},
                             {"delayed_values", m.delayed_values},
                             {"forecast_values", m.forecast_values}};
        if (m.improvement_pct) jm["improvement_pct"] = *m.improvement_pct;
        months.push_back(std::move(jm));
    }
    nlohmann::json forecasts = nlohmann::json::array();
    for (const auto& f : r.forecasts)
        forecasts.push_back({{"month", f.month},
                             {"plant", f.plant},
                             {"delta_forecast", f.delta_forecast},
                             {"hub_forecast", f.hub_forecast},
                             {"fc_forecast", f.fc_forecast},
                             {"actual", f.actual}});
    nlohmann::json drops = nlohmann::json::array();
    for (const auto& d : r.drops) drops.push_back({{"month", d.month}, {"plant", d.plant}, {"reason", d.reason}});
    nlohmann::json models = nlohmann::json::array();
    for (const auto& [k, pm] : r.plant_models)
        models.push_back({{"plant", k}, {"spec", pm.spec}, {"offset", pm.offset}});
    return {{"months", months}, {"forecasts", forecasts}, {"drops", drops}, {"plant_models", models}};
}

inline BacktestReport report_from_json(const nlohmann::json& j) {
    BacktestReport r;
    for (const auto& jm : j.at("months")) {
        MonthResult m;
        jm.at("month").get_to(m.month);
        m.real_dist = distfit::normal_from_json(jm.at("real_dist"));
        m.delayed_dist = distfit::normal_from_json(jm.at("delayed_dist"));
        m.forecast_dist = distfit::normal_from_json(jm.at("forecast_dist"));
        jm.at("mean_error_delay").get_to(m.mean_error_delay);
        jm.at("mean_error_forecast").get_to(m.mean_error_forecast);
        jm.at("d_real_delay").get_to(m.d_real_delay);
        jm.at("d_real_forecast").get_to(m.d_real_forecast);
        jm.at("improvement_abs").get_to(m.improvement_abs);
        if (!jm.at("improvement_pct").is_null()) m.improvement_pct = jm.at("improvement_pct").get<double>();
        jm.at("real_values").get_to(m.real_values);
        jm.at("delayed_values").get_to(m.delayed_values);
        jm.at("forecast_values").get_to(m.forecast_values);
        r.months.push_back(std::move(m));
    }
    for (const auto& jf : j.at("forecasts")) {
        ForecastLogEntry f;
        jf.at("month").get_to(f.month);
        jf.at("plant").get_to(f.plant);
        jf.at("delta_forecast").get_to(f.delta_forecast);
        jf.at("hub_forecast").get_to(f.hub_forecast);
        jf.at("fc_forecast").get_to(f.fc_forecast);
        jf.at("actual").get_to(f.actual);
        r.forecasts.push_back(std::move(f));
    }
    for (const auto& jd : j.at("drops")) {
        DropLogEntry d;
        jd.at("month").get_to(d.month);
        jd.at("plant").get_to(d.plant);
        jd.at("reason").get_to(d.reason);
        r.drops.push_back(std::move(d));
    }
    for (const auto& jp : j.value("plant_models", nlohmann::json::array())) {
        PlantModel pm;
        jp.at("spec").get_to(pm.spec);
        jp.at("offset").get_to(pm.offset);
        r.plant_models.emplace(jp.at("plant").get<PlantKey>(), pm);
    }
    return r;
}

}  // namespace fuelcast::backtest
