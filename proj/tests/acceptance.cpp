// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "fuelcast/fuelcast.hpp"
#include "fuelcast/json.hpp"
#include "fuelcast/synthetic.hpp"
#include "support.hpp"

using namespace fuelcast;
using testing::read_text;
using testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

arima::ArimaFit model(arima::ArimaSpec spec, std::vector<double> phi, std::vector<double> theta, double mu,
                      double sigma2) {
    arima::ArimaFit m;
    m.spec = spec;
    m.phi = std::move(phi);
    m.theta = std::move(theta);
    m.mu = mu;
    m.sigma2 = sigma2;
    return m;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome aggregation() {
    std::istringstream in(
        "Date,PlantID,State,Source,Quantity,AvgHeatContent,FuelCost\n"
        "201301,127,TX,SUB,476,17.7,1.10\n"
        "201301,127,TX,SUB,28866,17,2.29\n"
        "201301,127,TX,SUB,43824,16.8,2.08\n"
        "201301,127,TX,SUB,86254,17,2.12\n"
        "201301,127,TX,SUB,43256,17,2.10\n");
    const auto recs = ingest::parse_records(in);
    const auto t0 = std::chrono::steady_clock::now();
    const auto agg = ingest::aggregate_fuel_cost(recs);
    const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    const double v = agg.begin()->second;
    return {agg.size() == 1 && std::abs(v - 2.13) <= 0.005 && us < 1000.0,
            "FC' = " + fmt("%.5f", v) + " (2.13 +/- 0.005), aggregation " + fmt("%.1f", us) + " us"};
}

Outcome kl_oracle() {
    std::mt19937_64 rng(20170101);
    std::uniform_real_distribution<double> mu(-10.0, 10.0), sd(0.1, 10.0);
    double worst = 0.0;
    bool symmetric = true;
    for (int i = 0; i < 1000; ++i) {
        const distfit::NormalDist p(mu(rng), sd(rng)), q(mu(rng), sd(rng));
        worst = std::max(worst, std::abs(distfit::kl_gaussian(p, q) - testing::kl_quadrature(p, q)));
        worst = std::max(worst, std::abs(distfit::kl_gaussian(q, p) - testing::kl_quadrature(q, p)));
        symmetric = symmetric && distfit::symmetric_kl(p, q) == distfit::symmetric_kl(q, p);
    }
    return {worst <= 1e-4 && symmetric,
            "max |closed - quadrature| = " + fmt("%.2e", worst) + " (<= 1e-4), symmetric: " + (symmetric ? "yes" : "no")};
}

Outcome likelihood_oracle() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> partial(-0.9, 0.9), unit(0.0, 1.0);
    std::normal_distribution<double> z;
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int p = static_cast<int>(rng() % 3);
        const int q = static_cast<int>(rng() % 3);
        std::vector<double> ap(p), mp(q);
        for (double& v : ap) v = partial(rng);
        for (double& v : mp) v = partial(rng);
        const auto m = model({p, 0, q, true}, arima::coefficients_from_partials(ap),
                             arima::coefficients_from_partials(mp), 2.0 * unit(rng) - 1.0, 0.1 + 2.0 * unit(rng));
        const std::size_t lo = static_cast<std::size_t>(p + q + 1);
        const std::size_t n = lo + rng() % (8 - lo + 1);
        std::vector<double> x(n);
        for (double& v : x) v = m.mean() + 1.5 * z(rng);
        const double a = arima::log_likelihood(m, x);
        const double b = testing::dense_arma_loglik(m.phi, m.theta, m.mean(), m.sigma2, x);
        worst = std::max(worst, std::abs(a - b));
    }
    return {worst <= 1e-8, "200 ARMA(p<=2,q<=2), n<=8: max |state-space - dense| = " + fmt("%.2e", worst) + " (<= 1e-8)"};
}

Outcome recovery() {
    std::vector<double> ar_err, ma_err;
    double worst_ols = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(500 + seed);
        const auto y = arima::simulate(model({1, 0, 0, true}, {0.6}, {}, 0.0, 1.0), 500, rng);
        const auto f = arima::fit(y, {1, 0, 0, true});
        ar_err.push_back(std::abs(f.phi[0] - 0.6));
        worst_ols = std::max(worst_ols, std::abs(f.phi[0] - testing::ols_ar1(y).second));
        const auto x = arima::simulate(model({0, 0, 1, true}, {}, {0.5}, 0.0, 1.0), 1000, rng);
        const auto g = arima::fit(x, {0, 0, 1, true});
        ma_err.push_back(std::abs(g.theta[0] - 0.5));
    }
    const double ar_med = median(ar_err), ma_med = median(ma_err);
    const double ar_max = *std::max_element(ar_err.begin(), ar_err.end());
    const double ma_max = *std::max_element(ma_err.begin(), ma_err.end());
    const bool ok = ar_med < 0.05 && ma_med < 0.05 && ar_max <= 0.10 && ma_max <= 0.10 && worst_ols <= 0.03;
    return {ok, "AR(1) median/max err " + fmt("%.3f", ar_med) + "/" + fmt("%.3f", ar_max) + ", MA(1) " +
                    fmt("%.3f", ma_med) + "/" + fmt("%.3f", ma_max) + ", max |phi - OLS| " + fmt("%.3f", worst_ols)};
}

Outcome forecast_closed_forms() {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z;
    std::vector<double> y(40);
    for (double& v : y) v = z(rng);
    bool rw_exact = true;
    for (double v : arima::forecast(model({0, 1, 0, false}, {}, {}, 0.0, 1.0), y, 6)) rw_exact = rw_exact && v == y.back();
    double worst = 0.0;
    const double phi = 0.65;
    const auto f = arima::forecast(model({1, 0, 0, false}, {phi}, {}, 0.0, 1.0), y, 3);
    for (std::size_t h = 1; h <= 3; ++h) worst = std::max(worst, std::abs(f[h - 1] - std::pow(phi, h) * y.back()));
    return {rw_exact && worst <= 1e-8, std::string("random walk exact: ") + (rw_exact ? "yes" : "no") +
                                           ", AR(1) max |f - phi^h y| = " + fmt("%.1e", worst) + " (<= 1e-8)"};
}

std::vector<std::pair<long long, double>> month_forecasts(const backtest::BacktestReport& r, YearMonth m) {
    std::vector<std::pair<long long, double>> out;
    for (const auto& f : r.forecasts)
        if (f.month == m) out.emplace_back(f.plant.plant_id, f.fc_forecast);
    return out;
}

Outcome pipeline_identity() {
    log::ScopedSink quiet([](const std::string&) {});
    const auto ds = synthetic::noisy_world(42);
    backtest::BacktestConfig cfg;
    auto oracle = cfg;
    oracle.oracle_injection = true;
    const auto r = backtest::run_backtest(ds.plants, ds.hub, oracle);
    bool identity = true;
    for (const auto& m : r.months) identity = identity && m.forecast_dist == m.real_dist;

    const auto base = backtest::run_backtest(ds.plants, ds.hub, cfg);
    bool hygiene = true;
    int runs = 0;
    for (YearMonth m = cfg.eval_span.first; m <= cfg.eval_span.last; ++m) {
        for (double factor : {0.5, 1.9}) {
            auto bad = ds;
            for (auto& [k, s] : bad.plants)
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (s.month_at(i) > m - cfg.delay_months) s[i] = *s[i] * factor;
            for (std::size_t i = 0; i < bad.hub.size(); ++i)
                if (bad.hub.month_at(i) > m - 1) bad.hub[i] = *bad.hub[i] * factor;
            const auto rb = backtest::run_backtest(bad.plants, bad.hub, cfg);
            ++runs;
            hygiene = hygiene && month_forecasts(rb, m) == month_forecasts(base, m);
        }
    }
    return {identity && hygiene, std::string("oracle injection forecast_dist == real_dist: ") +
                                     (identity ? "yes" : "no") + ", forecasts unchanged under " +
                                     std::to_string(runs) + " future-data corruptions: " + (hygiene ? "yes" : "no")};
}

struct RampRun {
    TempDir dir{"fuelcast_acceptance"};
    fs::path run;
    int code = -1;
};

RampRun& ramp_run() {
    static RampRun rr;
    if (rr.code >= 0) return rr;
    std::ostringstream out, err;
    cli::SynthOptions s;
    s.kind = "ramp";
    s.out = rr.dir / "synth";
    rr.code = cli::cmd_synth(s, out, err);
    if (rr.code != 0) return rr;
    cli::IngestOptions in;
    in.records = s.out / "records.csv";
    in.hub = s.out / "hub.csv";
    in.state = "TX";
    in.source = "NG";
    in.out = rr.dir / "dataset";
    rr.code = cli::cmd_ingest(in, out, err);
    if (rr.code != 0) return rr;
    cli::BacktestOptions bt;
    bt.dataset = in.out;
    bt.config = s.out / "backtest.conf";
    bt.out = rr.run = rr.dir / "run";
    rr.code = cli::cmd_backtest(bt, out, err);
    if (rr.code != 0) std::cerr << err.str();
    return rr;
}

Outcome synthetic_end_to_end() {
    auto& rr = ramp_run();
    if (rr.code != 0) return {false, "pipeline exited with " + std::to_string(rr.code)};
    const auto r = backtest::report_from_json(nlohmann::json::parse(read_text(rr.run / "results.json")));
    double worst_err = 0.0, worst_imp = 1.0;
    bool all_have_pct = true;
    for (const auto& m : r.months) {
        worst_err = std::max(worst_err, m.mean_error_forecast);
        all_have_pct = all_have_pct && m.improvement_pct.has_value();
        if (m.improvement_pct) worst_imp = std::min(worst_imp, *m.improvement_pct);
    }
    const bool ok = r.months.size() == 6 && r.forecasts.size() == 6 * 29 && worst_err < 0.001 && all_have_pct &&
                    worst_imp > 0.90;
    return {ok, "29 plants x 6 months: max mean_error_forecast " + fmt("%.2e", 100.0 * worst_err) +
                    "% (< 0.1%), min improvement " + fmt("%.1f", 100.0 * worst_imp) + "% (> 90%)"};
}

Outcome published_numbers() {
    // Mean-error metric arithmetic from its own means; display rounding of the
    // printed means leaves up to 0.1 point of slack on the other rows.
    struct Row3 {
        double real, delay, err_delay, forecast, err_forecast;
    };
    const Row3 t3[] = {{2.97, 2.29, 22.9, 3.01, 1.3},  {2.98, 2.26, 24.2, 3.29, 10.4}, {3.24, 2.72, 16.0, 3.12, 3.7},
                       {3.27, 2.97, 9.1, 3.27, 0.0},   {2.95, 2.98, 1.0, 3.26, 10.5},  {4.20, 3.24, 22.9, 2.80, 33.3}};
    bool ok = report::percent(backtest::mean_error(3.01, 2.97)) == "1.3%" &&
              report::percent(backtest::mean_error(2.29, 2.97)) == "22.9%";
    double worst = 0.0;
    for (const auto& r : t3) {
        worst = std::max(worst, std::abs(100.0 * backtest::mean_error(r.delay, r.real) - r.err_delay));
        worst = std::max(worst, std::abs(100.0 * backtest::mean_error(r.forecast, r.real) - r.err_forecast));
    }
    ok = ok && worst <= 0.1 + 1e-9;
    // Improvement column of the divergence table.
    struct Row4 {
        double d_delay, d_forecast;
        const char* abs;
        const char* pct;
    };
    const Row4 t4[] = {{4.22, 0.03, "4.19", "99.3%"},   {4.13, 1.05, "3.08", "74.6%"},  {1.34, 0.19, "1.15", "85.8%"},
                       {1.54, 0.90, "0.64", "41.6%"},   {1.78, 2.74, "-0.96", "-53.9%"}, {9.69, 20.33, "-10.64", "-109.8%"}};
    for (const auto& r : t4) {
        const double imp = r.d_delay - r.d_forecast;
        ok = ok && csv::fixed(imp, 2) == r.abs && report::percent(imp / r.d_delay) == r.pct;
    }
    std::string detail = "published table arithmetic reproduced (max mean-error slack " + fmt("%.2f", worst) + " pt)";

    const char* records = std::getenv("FUELCAST_RECORDS");
    const char* hub = std::getenv("FUELCAST_HUB");
    if (!records || !hub) return {ok, detail + "; full-data run skipped (set FUELCAST_RECORDS and FUELCAST_HUB)"};

    TempDir dir("fuelcast_published");
    std::ostringstream out, err;
    cli::IngestOptions in;
    in.records = records;
    in.hub = hub;
    in.hub_daily = std::getenv("FUELCAST_HUB_DAILY") != nullptr;
    in.state = "TX";
    in.source = "NG";
    in.span = parse_span("201301:201612");
    in.out = dir / "dataset";
    cli::BacktestOptions bt;
    bt.dataset = in.out;
    bt.out = dir / "run";
    if (cli::cmd_ingest(in, out, err) != 0 || cli::cmd_backtest(bt, out, err) != 0)
        return {false, detail + "; full-data run failed: " + err.str()};
    const auto r = backtest::report_from_json(nlohmann::json::parse(read_text(bt.out / "results.json")));
    bool self_consistent = true;
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < r.months.size() && i < 6; ++i) {
        const auto& m = r.months[i];
        self_consistent = self_consistent &&
                          m.mean_error_forecast == backtest::mean_error(m.forecast_dist.mu(), m.real_dist.mu()) &&
                          m.mean_error_delay == backtest::mean_error(m.delayed_dist.mu(), m.real_dist.mu());
        worst_gap = std::max(worst_gap, std::abs(100.0 * m.mean_error_delay - t3[i].err_delay));
        worst_gap = std::max(worst_gap, std::abs(100.0 * m.mean_error_forecast - t3[i].err_forecast));
    }
    return {ok && self_consistent, detail + "; full data: metrics consistent with own means: " +
                                       (self_consistent ? "yes" : "no") + ", max gap to published errors " +
                                       fmt("%.1f", worst_gap) + " pt (expected within 5)"};
}

Outcome determinism() {
    auto& rr = ramp_run();
    if (rr.code != 0) return {false, "initial run failed"};
    std::ostringstream out, err;
    cli::BacktestOptions again;
    again.manifest = rr.run / "manifest.json";
    again.out = rr.dir / "rerun";
    if (cli::cmd_backtest(again, out, err) != 0) return {false, "rerun failed: " + err.str()};
    int files = 0;
    bool same = true;
    for (const auto& e : fs::directory_iterator(rr.run)) {
        const auto name = e.path().filename();
        if (name == "manifest.json") continue;
        ++files;
        same = same && read_text(e.path()) == read_text(again.out / name);
    }
    return {same && files == 7, std::to_string(files) + " output files byte-identical on rerun from manifest: " +
                                    (same ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "aggregation reproduction", 0.001, aggregation},
        {2, "KL closed form vs quadrature", 5, kl_oracle},
        {3, "ARIMA likelihood oracle", 10, likelihood_oracle},
        {4, "parameter recovery", 30, recovery},
        {5, "forecast closed forms", 1, forecast_closed_forms},
        {6, "pipeline identity and hygiene", 5, pipeline_identity},
        {7, "synthetic end-to-end", 60, synthetic_end_to_end},
        {8, "published-number arithmetic", 60, published_numbers},
        {9, "determinism", 60, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        // Criterion 1 times the aggregation call itself inside its body.
        const bool in_time = c.id == 1 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " ["
                  << fmt("%.3f", secs) << " s, budget " << fmt("%g", c.budget_s) << " s]\n";
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed\n" : "all criteria passed\n");
    return failures ? 1 : 0;
}
