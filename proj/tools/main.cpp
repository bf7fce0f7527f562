#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace fuelcast;
using namespace fuelcast::cli;

namespace {

arima::ArimaSpec spec_arg(const std::string& text) { return arima::parse_spec(text); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Plant fuel-cost forecasting from delayed reports and hub prices"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir;
    std::string config_path;
    std::uint64_t seed = 1;
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--config", config_path, "Backtest config file (key = value)");
    app.add_option("--seed", seed, "Seed for the synthetic data generator");

    IngestOptions ingest;
    std::string span_text;
    auto* c_ingest = app.add_subcommand("ingest", "Aggregate plant records into a dataset directory");
    c_ingest->add_option("--records", ingest.records, "Plant fuel-receipt records CSV")->required();
    c_ingest->add_option("--hub", ingest.hub, "Hub price CSV (Date,Price)")->required();
    c_ingest->add_option("--state", ingest.state, "Keep only this state");
    c_ingest->add_option("--source", ingest.source, "Keep only this energy source");
    c_ingest->add_option("--span", span_text, "Month span YYYYMM:YYYYMM");
    c_ingest->add_option("--max-missing", ingest.policy.max_total_missing, "Most missing months per plant")
        ->capture_default_str();
    c_ingest->add_option("--max-gap-run", ingest.policy.max_gap_run, "Longest allowed run of missing months")
        ->capture_default_str();
    c_ingest->add_flag("--hub-daily", ingest.hub_daily, "Average several hub rows per month");

    FitOptions fit;
    std::vector<std::string> spec_texts;
    std::string grid_text;
    std::string fit_plant;
    auto* c_fit = app.add_subcommand("fit", "Fit an ARIMA model to one series");
    c_fit->add_option("--series", fit.series, "Series CSV (dataset series.csv, hub.csv or Date,Value)")->required();
    c_fit->add_option("--plant", fit_plant, "Plant id when the file holds several plants");
    c_fit->add_option("--spec", spec_texts, "Model order p,d,q[,nc]; repeat to select by BIC");
    c_fit->add_option("--grid", grid_text, "Candidate orders separated by ';'");
    c_fit->add_option("--transform", fit.transform, "none, log or log-offset")->capture_default_str();
    c_fit->add_option("--offset-margin", fit.offset_margin, "Margin for log-offset")->capture_default_str();
    c_fit->add_flag("--diagnostics", fit.diagnostics, "Write ACF/PACF for lags 1..24");
    c_fit->add_option("--horizon", fit.horizon, "Forecast steps to include");

    BacktestOptions bt;
    std::vector<std::string> overrides;
    std::string manifest_path;
    std::string dataset_path;
    auto* c_bt = app.add_subcommand("backtest", "Rolling-origin evaluation against the delayed baseline");
    c_bt->add_option("--dataset", dataset_path, "Dataset directory from ingest");
    c_bt->add_option("--set", overrides, "Config override key=value (repeatable)");
    c_bt->add_option("--manifest", manifest_path, "Rerun from a previous run's manifest.json");
    c_bt->add_option("--threads", bt.threads, "Worker threads for per-plant fits");

    ReportOptions rep;
    auto* c_report = app.add_subcommand("report", "Re-render tables from a previous backtest run");
    c_report->add_option("--run", rep.run, "Backtest output directory")->required();

    SynthOptions synth;
    auto* c_synth = app.add_subcommand("synth", "Write a synthetic records/hub pair");
    c_synth->add_option("--kind", synth.kind, "noisy or ramp")->capture_default_str();
    c_synth->add_option("--plants", synth.plants, "Number of plants")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Exit::usage;
    }

    auto need_out = [&]() -> bool {
        if (out_dir.empty()) {
            std::cerr << "error: --out is required\n";
            return false;
        }
        return true;
    };

    try {
        if (c_ingest->parsed()) {
            if (!need_out()) return Exit::usage;
            if (!span_text.empty()) {
                ingest.span = parse_span(span_text);
                if (!ingest.span) throw ConfigError("bad span '" + span_text + "' (expected YYYYMM:YYYYMM)");
            }
            ingest.out = out_dir;
            return cmd_ingest(ingest, std::cout, std::cerr);
        }
        if (c_fit->parsed()) {
            for (const auto& s : spec_texts) fit.specs.push_back(spec_arg(s));
            if (!grid_text.empty())
                for (const auto& s : arima::parse_grid(grid_text)) fit.specs.push_back(s);
            if (!fit_plant.empty()) {
                auto id = csv::parse_int(fit_plant);
                if (!id) throw ConfigError("bad plant id '" + fit_plant + "'");
                fit.plant = *id;
            }
            if (!out_dir.empty()) fit.out = fs::path(out_dir);
            return cmd_fit(fit, std::cout, std::cerr);
        }
        if (c_bt->parsed()) {
            if (!need_out()) return Exit::usage;
            for (const auto& kv : overrides) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
                bt.overrides[std::string(csv::trim(kv.substr(0, eq)))] = std::string(csv::trim(kv.substr(eq + 1)));
            }
            if (!dataset_path.empty()) bt.dataset = fs::path(dataset_path);
            if (!config_path.empty()) bt.config = fs::path(config_path);
            if (!manifest_path.empty()) bt.manifest = fs::path(manifest_path);
            bt.out = out_dir;
            return cmd_backtest(bt, std::cout, std::cerr);
        }
        if (c_report->parsed()) {
            if (!out_dir.empty()) rep.out = fs::path(out_dir);
            return cmd_report(rep, std::cout, std::cerr);
        }
        if (c_synth->parsed()) {
            if (!need_out()) return Exit::usage;
            synth.seed = seed;
            synth.out = out_dir;
            return cmd_synth(synth, std::cout, std::cerr);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Usage ? Exit::usage : Exit::data;
    }
    return Exit::usage;
}
