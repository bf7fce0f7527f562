#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fuelcast/arima/spec.hpp"
#include "fuelcast/config.hpp"
#include "fuelcast/ingest.hpp"
#include "fuelcast/month.hpp"

namespace fuelcast::cli {

namespace fs = std::filesystem;

inline constexpr const char* tool_version = "fuelcast 0.3.0";

/// Process exit codes.
enum Exit : int { ok = 0, usage = 1, data = 2, numerical = 3 };

struct IngestOptions {
    fs::path records;
    fs::path hub;
    std::string state;   ///< empty = all states
    std::string source;  ///< empty = all sources
    std::optional<MonthSpan> span;
    ingest::InclusionPolicy policy;
    bool hub_daily = false;
    fs::path out;
};

struct FitOptions {
    fs::path series;
    std::optional<long long> plant;
    std::vector<arima::ArimaSpec> specs;  ///< one spec fits it; several select by BIC
    std::string transform = "none";       ///< none | log | log-offset
    double offset_margin = 1.0;
    bool diagnostics = false;
    std::size_t max_lag = 24;
    std::size_t horizon = 0;
    std::optional<fs::path> out;
};

struct BacktestOptions {
    std::optional<fs::path> dataset;
    std::optional<fs::path> config;
    config::KeyValues overrides;
    std::optional<fs::path> manifest;  ///< rerun from a previous run's manifest
    fs::path out;
    unsigned threads = 0;              ///< 0 = keep the configured value
};

struct ReportOptions {
    fs::path run;
    std::optional<fs::path> out;
};

struct SynthOptions {
    std::string kind = "noisy";  ///< noisy | ramp
    std::uint64_t seed = 1;
    std::size_t plants = 29;
    fs::path out;
};

// Each command writes data products under its output directory, prints a
// human-readable summary on `out`, diagnostics on `err`, and returns an Exit code.
int cmd_ingest(const IngestOptions& opt, std::ostream& out, std::ostream& err);
int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err);
int cmd_backtest(const BacktestOptions& opt, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string file_digest(const fs::path& path);

}  // namespace fuelcast::cli
