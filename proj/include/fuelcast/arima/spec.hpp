#pragma once

#include <cmath>
#include <compare>
#include <string>
#include <vector>

#include "fuelcast/csv.hpp"
#include "fuelcast/error.hpp"

namespace fuelcast::arima {

/// ARIMA(p, d, q) orders plus whether a constant is estimated.
///
/// Polynomials follow the minus-sign convention
///   phi(B)   = 1 - phi_1 B - ... - phi_p B^p
///   theta(B) = 1 - theta_1 B - ... - theta_q B^q
/// so an MA(1) has lag-one autocorrelation -theta_1 / (1 + theta_1^2).
/// For d = 0 the constant is a process mean; for d >= 1 it is a drift of the
/// differenced series.
struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;
    bool with_constant = true;

    static constexpr int max_order = 5;

    /// Throws ConfigError unless 0 <= p,d,q <= 5 and the model has a free parameter.
    void validate() const {
        if (p < 0 || d < 0 || q < 0 || p > max_order || d > max_order || q > max_order)
            throw ConfigError("ARIMA orders must lie in 0.." + std::to_string(max_order) + ": " + str());
        if (p + q == 0 && !with_constant) throw ConfigError("model has no free parameters: " + str());
    }

    [[nodiscard]] std::string str() const {
        return "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")" +
               (with_constant ? "+c" : "");
    }

    /// Parameters counted by BIC: AR, MA, constant, and the innovation variance.
    [[nodiscard]] int bic_param_count() const { return p + q + (with_constant ? 1 : 0) + 1; }

    auto operator<=>(const ArimaSpec&) const = default;
    bool operator==(const ArimaSpec&) const = default;
};

/// Parses "p,d,q" (constant included) or "p,d,q,nc" (no constant).
inline ArimaSpec parse_spec(const std::string& text) {
    auto fields = csv::split(text);
    if (fields.size() != 3 && fields.size() != 4) throw ConfigError("bad ARIMA spec '" + text + "'");
    ArimaSpec s;
    int* orders[] = {&s.p, &s.d, &s.q};
    for (int i = 0; i < 3; ++i) {
        auto v = csv::parse_int(fields[static_cast<std::size_t>(i)]);
        if (!v) throw ConfigError("bad ARIMA spec '" + text + "'");
        *orders[i] = static_cast<int>(*v);
    }
    if (fields.size() == 4) {
        if (fields[3] == "nc") s.with_constant = false;
        else if (fields[3] == "c") s.with_constant = true;
        else throw ConfigError("bad ARIMA spec '" + text + "' (4th field must be c or nc)");
    }
    s.validate();
    return s;
}

/// Parses a ';'-separated list of specs, e.g. "2,0,1;2,1,1".
inline std::vector<ArimaSpec> parse_grid(const std::string& text) {
    std::vector<ArimaSpec> grid;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find(';', pos);
        if (next == std::string::npos) next = text.size();
        auto tok = std::string(csv::trim(std::string_view(text).substr(pos, next - pos)));
        if (!tok.empty()) grid.push_back(parse_spec(tok));
        pos = next + 1;
    }
    if (grid.empty()) throw ConfigError("empty ARIMA grid '" + text + "'");
    return grid;
}

inline std::string format_spec(const ArimaSpec& s) {
    return std::to_string(s.p) + "," + std::to_string(s.d) + "," + std::to_string(s.q) +
           (s.with_constant ? "" : ",nc");
}

inline std::string format_grid(const std::vector<ArimaSpec>& grid) {
    std::string out;
    for (const auto& s : grid) out += (out.empty() ? "" : ";") + format_spec(s);
    return out;
}

/// A fitted (or hand-specified) model.
struct ArimaFit {
    ArimaSpec spec;
    std::vector<double> phi;    ///< phi_1..phi_p
    std::vector<double> theta;  ///< theta_1..theta_q
    double mu = 0.0;            ///< intercept: phi(B) w_t = mu + theta(B) e_t
    double sigma2 = 1.0;        ///< innovation variance
    double loglik = 0.0;
    std::size_t n_eff = 0;      ///< observations after differencing
    double bic = 0.0;

    /// Mean of the differenced process implied by the intercept.
    [[nodiscard]] double mean() const {
        double s = 1.0;
        for (double c : phi) s -= c;
        return mu / s;
    }
};

/// k ln(n_eff) - 2 loglik.
inline double bic(const ArimaSpec& spec, double loglik, std::size_t n_eff) {
    return spec.bic_param_count() * std::log(static_cast<double>(n_eff)) - 2.0 * loglik;
}

}  // namespace fuelcast::arima
