#include "commands.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fuelcast/arima.hpp"
#include "fuelcast/backtest.hpp"
#include "fuelcast/config.hpp"
#include "fuelcast/csv.hpp"
#include "fuelcast/error.hpp"
#include "fuelcast/ingest.hpp"
#include "fuelcast/json.hpp"
#include "fuelcast/report.hpp"
#include "fuelcast/series.hpp"
#include "fuelcast/synthetic.hpp"

namespace fuelcast::cli {

using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
    if (!out) throw DataError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Runs `body`, mapping library errors onto exit codes with a one-line diagnostic.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::Usage: return Exit::usage;
            case ErrorKind::Data: return Exit::data;
            case ErrorKind::Numerical: return Exit::numerical;
        }
        return Exit::data;
    } catch (const json::exception& e) {
        err << "error: malformed JSON: " << e.what() << '\n';
        return Exit::data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Exit::data;
    }
}

/// Prefixes parse errors with the file they came from.
template <class F>
auto with_path(const fs::path& path, F&& f) {
    try {
        return f();
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<ingest::FuelRecord> load_records(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return with_path(path, [&] { return ingest::parse_records(in); });
}

MonthSeries load_hub(const fs::path& path, bool daily) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return with_path(path, [&] { return ingest::load_hub_prices(in, daily); });
}

/// Reads a long-format `PlantID,State,Source,Date,FuelCost` file.
ingest::SeriesMap load_series_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return with_path(path, [&] {
        csv::Reader reader(in);
        const auto c_plant = reader.column("PlantID");
        const auto c_state = reader.column("State");
        const auto c_source = reader.column("Source");
        const auto c_date = reader.column("Date");
        const auto c_value = reader.column("FuelCost");
        std::map<ingest::PlantKey, std::map<YearMonth, double>> points;
        std::vector<std::string> row;
        while (reader.next(row)) {
            auto id = csv::parse_int(row[c_plant]);
            auto date = YearMonth::parse(row[c_date]);
            auto value = csv::parse_double(row[c_value]);
            if (!id || !date || !value) throw MalformedRow(reader.line(), "unparseable series row");
            points[{*id, row[c_state], row[c_source]}][*date] = *value;
        }
        ingest::SeriesMap out;
        for (const auto& [key, pts] : points) {
            const YearMonth first = pts.begin()->first;
            const YearMonth last = pts.rbegin()->first;
            std::vector<std::optional<double>> v(static_cast<std::size_t>(last - first + 1));
            for (const auto& [m, x] : pts) v[static_cast<std::size_t>(m - first)] = x;
            out.emplace(key, MonthSeries(first, std::move(v)));
        }
        return out;
    });
}

std::string series_csv(const ingest::SeriesMap& plants) {
    std::ostringstream os;
    os << "PlantID,State,Source,Date,FuelCost\n";
    for (const auto& [key, s] : plants)
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i])
                os << key.plant_id << ',' << key.state << ',' << key.source << ',' << s.month_at(i).str() << ','
                   << csv::full(*s[i]) << '\n';
    return os.str();
}

std::string five_number_row(const report::FiveNumber& f) {
    return std::to_string(f.count) + ',' + csv::full(f.min) + ',' + csv::full(f.q1) + ',' + csv::full(f.median) +
           ',' + csv::full(f.q3) + ',' + csv::full(f.max);
}

}  // namespace

std::string file_digest(const fs::path& path) {
    const std::string bytes = read_file(path);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw DataError("sha256 failed for " + path.string());
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
    return os.str();
}

int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto records = load_records(opt.records);
        const auto hub = load_hub(opt.hub, opt.hub_daily);

        std::vector<ingest::FuelRecord> in_state;
        for (const auto& r : records)
            if (opt.state.empty() || r.state == opt.state) in_state.push_back(r);
        const auto agg = ingest::aggregate_fuel_cost(in_state);

        auto source_matches = [&](const ingest::PlantKey& k) { return opt.source.empty() || k.source == opt.source; };

        MonthSpan span;
        if (opt.span) {
            span = *opt.span;
        } else {
            std::optional<YearMonth> lo, hi;
            for (const auto& [k, v] : agg)
                if (source_matches(k.first)) {
                    lo = lo ? std::min(*lo, k.second) : k.second;
                    hi = hi ? std::max(*hi, k.second) : k.second;
                }
            if (!lo) throw DataError("no plants matched filter");
            span = {*lo, *hi};
        }

        std::set<ingest::PlantKey> candidates;
        for (const auto& [k, v] : agg)
            if (source_matches(k.first) && span.contains(k.second)) candidates.insert(k.first);
        if (candidates.empty()) throw DataError("no plants matched filter");

        ingest::SeriesMap series_map;
        for (const auto& key : candidates) series_map.emplace(key, ingest::build_plant_series(agg, key, span));
        const auto filtered = ingest::filter_plants(series_map, opt.policy);

        if (!hub.covers(span.first) || !hub.covers(span.last))
            err << "warning: hub prices cover " << hub.start().str() << ".." << hub.end().str()
                << ", narrower than the plant span " << span.first.str() << ".." << span.last.str() << '\n';

        // Per-source monthly summaries over every source in the state filter.
        std::map<std::pair<std::string, YearMonth>, std::vector<double>> by_source;
        for (const auto& [k, v] : agg)
            if (span.contains(k.second)) by_source[{k.first.source, k.second}].push_back(v);
        std::ostringstream stats;
        stats << "Month,Source,Count,Min,Q1,Median,Q3,Max\n";
        for (const auto& [k, values] : by_source)
            stats << k.second.str() << ',' << k.first << ',' << five_number_row(report::five_number(values)) << '\n';

        std::ostringstream drops;
        drops << "PlantID,State,Source,Reason\n";
        for (const auto& d : filtered.drops)
            drops << d.plant.plant_id << ',' << d.plant.state << ',' << d.plant.source << ','
                  << report::quote(d.reason) << '\n';

        json summary = {{"records", records.size()},
                        {"state", opt.state},
                        {"source", opt.source},
                        {"span", {{"first", span.first}, {"last", span.last}}},
                        {"hub_span", {{"first", hub.start()}, {"last", hub.end()}}},
                        {"candidates", candidates.size()},
                        {"retained", filtered.retained.size()},
                        {"dropped", filtered.drops.size()},
                        {"policy",
                         {{"max_total_missing", opt.policy.max_total_missing},
                          {"max_gap_run", opt.policy.max_gap_run}}}};

        ensure_dir(opt.out);
        write_file(opt.out / "series.csv", series_csv(filtered.retained));
        write_file(opt.out / "hub.csv", synthetic::hub_csv(hub));
        write_file(opt.out / "drops.csv", drops.str());
        write_file(opt.out / "source_stats.csv", stats.str());
        write_file(opt.out / "summary.json", summary.dump(2) + "\n");

        out << "records: " << records.size() << '\n'
            << "span: " << span.first.str() << ".." << span.last.str() << '\n'
            << "candidate plants: " << candidates.size() << '\n'
            << "retained plants: " << filtered.retained.size() << '\n'
            << "dropped plants: " << filtered.drops.size() << '\n';
        return Exit::ok;
    });
}

int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        // Either a long-format dataset file (needs a plant) or a Date,<value> file.
        MonthSeries s;
        json source = {{"path", opt.series.string()}};
        {
            std::ifstream probe(opt.series);
            if (!probe) throw DataError("cannot open " + opt.series.string());
            csv::Reader header(probe);
            if (header.find_column("PlantID")) {
                const auto plants = load_series_csv(opt.series);
                if (plants.empty()) throw DataError(opt.series.string() + ": no series rows");
                const ingest::SeriesMap::value_type* chosen = nullptr;
                for (const auto& kv : plants)
                    if (!opt.plant || kv.first.plant_id == *opt.plant) {
                        if (chosen && !opt.plant) throw ConfigError("several plants in file; pass --plant");
                        if (!chosen) chosen = &kv;
                    }
                if (!chosen) throw DataError("plant " + std::to_string(*opt.plant) + " not found");
                s = chosen->second;
                source["plant"] = chosen->first;
            } else if (header.find_column("Price")) {
                s = load_hub(opt.series, false);
            } else {
                std::ifstream in(opt.series);
                csv::Reader reader(in);
                const auto c_date = reader.column("Date");
                const auto c_value = reader.column("Value");
                std::map<YearMonth, double> pts;
                std::vector<std::string> row;
                while (reader.next(row)) {
                    auto m = YearMonth::parse(row[c_date]);
                    auto v = csv::parse_double(row[c_value]);
                    if (!m || !v) throw MalformedRow(reader.line(), "unparseable row");
                    pts[*m] = *v;
                }
                if (pts.empty()) throw DataError(opt.series.string() + ": no rows");
                std::vector<std::optional<double>> v(static_cast<std::size_t>(pts.rbegin()->first - pts.begin()->first + 1));
                for (const auto& [m, x] : pts) v[static_cast<std::size_t>(m - pts.begin()->first)] = x;
                s = MonthSeries(pts.begin()->first, std::move(v));
            }
        }
        if (!s.complete()) throw DataError("series has " + std::to_string(s.missing_count()) + " gaps; fit needs a complete series");

        if (opt.diagnostics && !opt.out) throw ConfigError("--diagnostics needs --out");

        series::Transform t(0.0);
        std::vector<double> y;
        if (opt.transform == "none") {
            y = s.dense();
        } else if (opt.transform == "log") {
            y = series::apply_transform(t, s).dense();
        } else if (opt.transform == "log-offset") {
            t = series::choose_offset(s, opt.offset_margin);
            y = series::apply_transform(t, s).dense();
        } else {
            throw ConfigError("unknown transform '" + opt.transform + "' (none, log, log-offset)");
        }

        const std::vector<arima::ArimaSpec> specs =
            opt.specs.empty() ? std::vector<arima::ArimaSpec>{{2, 1, 1, true}} : opt.specs;

        json doc = {{"series", source},
                    {"n", y.size()},
                    {"transform", {{"kind", opt.transform}, {"offset", t.offset()}}}};

        std::vector<std::string> diag_lines;
        if (opt.diagnostics) {
            const std::size_t lags = std::min(opt.max_lag, y.size() - 2);
            const auto level_acf = arima::acf(y, lags);
            const auto level_pacf = arima::pacf(y, lags);
            const auto dy = series::difference(y, 1);
            const std::size_t dlags = std::min(lags, dy.size() - 1);
            std::vector<double> diff_acf, diff_pacf;
            try {
                diff_acf = arima::acf(dy, dlags);
                diff_pacf = arima::pacf(dy, dlags);
            } catch (const ZeroVariance&) {
            }
            diag_lines.push_back("Lag,ACF,PACF,ACF_diff1,PACF_diff1");
            for (std::size_t k = 1; k <= lags; ++k) {
                std::string line = std::to_string(k) + ',' + csv::full(level_acf[k]) + ',' + csv::full(level_pacf[k - 1]);
                line += ',' + (k < diff_acf.size() ? csv::full(diff_acf[k]) : std::string());
                line += ',' + (k - 1 < diff_pacf.size() ? csv::full(diff_pacf[k - 1]) : std::string());
                diag_lines.push_back(line);
            }
        }

        arima::ArimaFit chosen;
        if (specs.size() == 1) {
            chosen = arima::fit(y, specs.front());
        } else {
            json candidates = json::array();
            for (const auto& sp : specs) {
                try {
                    const auto f = arima::fit(y, sp);
                    candidates.push_back({{"spec", sp}, {"bic", f.bic}, {"loglik", f.loglik}});
                } catch (const Error& e) {
                    candidates.push_back({{"spec", sp}, {"error", e.what()}});
                }
            }
            doc["candidates"] = candidates;
            chosen = arima::select_and_fit(y, specs);
        }
        doc["selected"] = chosen.spec.str();
        doc["fit"] = chosen;
        if (opt.horizon > 0) {
            const auto f = arima::forecast_with_variance(chosen, y, opt.horizon);
            std::vector<double> levels;
            for (double v : f.mean) levels.push_back(t.inverse(v));
            doc["forecast"] = {{"mean", f.mean}, {"variance", f.variance}, {"back_transformed", levels}};
        }

        out << "selected: " << chosen.spec.str() << '\n';
        out << "phi:";
        for (double c : chosen.phi) out << ' ' << c;
        out << "\ntheta:";
        for (double c : chosen.theta) out << ' ' << c;
        out << "\nmu: " << chosen.mu << "\nsigma2: " << chosen.sigma2 << "\nloglik: " << chosen.loglik
            << "\nbic: " << chosen.bic << "\nn_eff: " << chosen.n_eff << '\n';

        std::string diag;
        for (const auto& l : diag_lines) diag += l + '\n';
        if (opt.out) {
            ensure_dir(*opt.out);
            write_file(*opt.out / "fit.json", doc.dump(2) + "\n");
            if (opt.diagnostics) write_file(*opt.out / "acf_pacf.csv", diag);
        }
        return Exit::ok;
    });
}

namespace {

struct Dataset {
    ingest::SeriesMap plants;
    MonthSeries hub;
};

Dataset load_dataset(const fs::path& dir) {
    Dataset ds;
    ds.plants = load_series_csv(dir / "series.csv");
    ds.hub = load_hub(dir / "hub.csv", false);
    return ds;
}

}  // namespace

int cmd_backtest(const BacktestOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        backtest::BacktestConfig cfg;
        std::optional<fs::path> dataset = opt.dataset;
        json expected_digests;
        if (opt.manifest) {
            const json m = json::parse(read_file(*opt.manifest));
            std::istringstream cfg_text(m.at("config").get<std::string>());
            cfg = config::parse(cfg_text);
            if (!dataset) dataset = fs::path(m.at("dataset").get<std::string>());
            expected_digests = m.at("inputs");
        }
        if (opt.config) {
            std::ifstream in(*opt.config);
            if (!in) throw ConfigError("cannot open config " + opt.config->string());
            config::apply_overrides(cfg, config::parse_key_values(in));
        }
        config::apply_overrides(cfg, opt.overrides);
        if (opt.threads > 0) cfg.threads = opt.threads;
        cfg.validate();
        if (!dataset) throw ConfigError("backtest needs --dataset (or --manifest)");

        json digests = {{"series.csv", file_digest(*dataset / "series.csv")},
                        {"hub.csv", file_digest(*dataset / "hub.csv")}};
        if (!expected_digests.is_null() && expected_digests != digests)
            throw DataError("dataset " + dataset->string() + " differs from the one recorded in the manifest");

        const std::string started = utc_now();
        const auto ds = load_dataset(*dataset);
        const auto report = backtest::run_backtest(ds.plants, ds.hub, cfg);
        const auto docs = report::emit_tables(report);

        ensure_dir(opt.out);
        for (const auto& d : docs) write_file(opt.out / d.name, d.content);
        write_file(opt.out / "results.json", backtest::report_to_json(report).dump(2) + "\n");

        // The manifest records the config in canonical text form; threads do
        // not affect results and are reset so reruns are comparable.
        auto snapshot = cfg;
        snapshot.threads = 1;
        json manifest = {{"tool_version", tool_version},
                         {"config", config::to_text(snapshot)},
                         {"dataset", fs::absolute(*dataset).lexically_normal().string()},
                         {"inputs", digests},
                         {"outputs", json::array()},
                         {"started", started},
                         {"finished", utc_now()}};
        for (const auto& d : docs) manifest["outputs"].push_back(d.name);
        manifest["outputs"].push_back("results.json");
        write_file(opt.out / "manifest.json", manifest.dump(2) + "\n");

        out << report::mean_error_table(report) << '\n' << report::divergence_table(report);
        out << "plant-month forecasts: " << report.forecasts.size() << ", dropped: " << report.drops.size() << '\n';
        return Exit::ok;
    });
}

int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto report = backtest::report_from_json(json::parse(read_file(opt.run / "results.json")));
        const fs::path dest = opt.out.value_or(opt.run);
        ensure_dir(dest);
        for (const auto& d : report::emit_tables(report)) write_file(dest / d.name, d.content);
        out << report::mean_error_table(report) << '\n' << report::divergence_table(report);
        return Exit::ok;
    });
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        synthetic::Dataset ds;
        if (opt.kind == "ramp") {
            synthetic::RampWorldOptions o;
            o.plants = opt.plants;
            ds = synthetic::ramp_world(o);
        } else if (opt.kind == "noisy") {
            synthetic::NoisyWorldOptions o;
            o.plants = opt.plants;
            ds = synthetic::noisy_world(opt.seed, o);
        } else {
            throw ConfigError("unknown synthetic world '" + opt.kind + "' (ramp, noisy)");
        }
        ensure_dir(opt.out);
        write_file(opt.out / "records.csv", synthetic::records_csv(ds.plants));
        write_file(opt.out / "hub.csv", synthetic::hub_csv(ds.hub));
        backtest::BacktestConfig cfg;
        cfg.train_span = {ds.hub.start(), ds.hub.end() - 6};
        cfg.eval_span = {ds.hub.end() - 5, ds.hub.end()};
        write_file(opt.out / "backtest.conf", config::to_text(cfg));
        out << "wrote " << ds.plants.size() << " plants, " << ds.hub.size() << " months to " << opt.out.string() << '\n';
        return Exit::ok;
    });
}

}  // namespace fuelcast::cli
