#pragma once

#include <istream>
#include <map>
#include <sstream>
#include <string>

#include "fuelcast/arima/spec.hpp"
#include "fuelcast/backtest.hpp"
#include "fuelcast/csv.hpp"
#include "fuelcast/error.hpp"

// Flat key-value configuration:
//
//   # comment
//   train_start = 201301
//   train_end = 201606
//   eval_start = 201607
//   eval_end = 201612
//   plant_spec_grid = 2,0,1;2,1,1
//   hub_spec = 2,1,1
//   offset_margin = 1.0
//   refit_each_step = true
//   delay_months = 3
//   lognormal_correction = false
//   threads = 1

namespace fuelcast::config {

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = csv::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        auto key = std::string(csv::trim(body.substr(0, eq)));
        auto value = std::string(csv::trim(body.substr(eq + 1)));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

namespace detail {

inline YearMonth month(const std::string& key, const std::string& v) {
    auto m = YearMonth::parse(v);
    if (!m) throw ConfigError("config key " + key + ": bad month '" + v + "'");
    return *m;
}

inline bool flag(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key " + key + ": expected true/false, got '" + v + "'");
}

inline double real(const std::string& key, const std::string& v) {
    auto x = csv::parse_double(v);
    if (!x) throw ConfigError("config key " + key + ": expected a number, got '" + v + "'");
    return *x;
}

inline long long integer(const std::string& key, const std::string& v) {
    auto x = csv::parse_int(v);
    if (!x) throw ConfigError("config key " + key + ": expected an integer, got '" + v + "'");
    return *x;
}

}  // namespace detail

/// Overlays `kv` on `cfg`. Unknown keys are rejected.
inline void apply_overrides(backtest::BacktestConfig& cfg, const KeyValues& kv) {
    for (const auto& [key, v] : kv) {
        if (key == "train_start") cfg.train_span.first = detail::month(key, v);
        else if (key == "train_end") cfg.train_span.last = detail::month(key, v);
        else if (key == "eval_start") cfg.eval_span.first = detail::month(key, v);
        else if (key == "eval_end") cfg.eval_span.last = detail::month(key, v);
        else if (key == "plant_spec_grid") cfg.plant_spec_grid = arima::parse_grid(v);
        else if (key == "hub_spec") cfg.hub_spec = arima::parse_spec(v);
        else if (key == "offset_margin") cfg.offset_margin = detail::real(key, v);
        else if (key == "refit_each_step") cfg.refit_each_step = detail::flag(key, v);
        else if (key == "delay_months") cfg.delay_months = static_cast<int>(detail::integer(key, v));
        else if (key == "lognormal_correction") cfg.lognormal_correction = detail::flag(key, v);
        else if (key == "threads") cfg.threads = static_cast<unsigned>(std::max(1LL, detail::integer(key, v)));
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

inline backtest::BacktestConfig parse(std::istream& in) {
    backtest::BacktestConfig cfg;
    apply_overrides(cfg, parse_key_values(in));
    return cfg;
}

/// Canonical text form; parse(to_text(cfg)) == cfg for every field except
/// oracle_injection, which is not configurable from files.
inline std::string to_text(const backtest::BacktestConfig& cfg) {
    std::ostringstream os;
    os << "train_start = " << cfg.train_span.first.str() << '\n'
       << "train_end = " << cfg.train_span.last.str() << '\n'
       << "eval_start = " << cfg.eval_span.first.str() << '\n'
       << "eval_end = " << cfg.eval_span.last.str() << '\n'
       << "plant_spec_grid = " << arima::format_grid(cfg.plant_spec_grid) << '\n'
       << "hub_spec = " << arima::format_spec(cfg.hub_spec) << '\n'
       << "offset_margin = " << csv::full(cfg.offset_margin) << '\n'
       << "refit_each_step = " << (cfg.refit_each_step ? "true" : "false") << '\n'
       << "delay_months = " << cfg.delay_months << '\n'
       << "lognormal_correction = " << (cfg.lognormal_correction ? "true" : "false") << '\n'
       << "threads = " << cfg.threads << '\n';
    return os.str();
}

}  // namespace fuelcast::config
