#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <tuple>
#include <vector>

#include "fuelcast/arima/diagnostics.hpp"
#include "fuelcast/arima/nelder_mead.hpp"
#include "fuelcast/arima/polynomial.hpp"
#include "fuelcast/arima/spec.hpp"
#include "fuelcast/arima/statespace.hpp"
#include "fuelcast/error.hpp"
#include "fuelcast/log.hpp"
#include "fuelcast/series.hpp"

namespace fuelcast::arima {

namespace detail {

inline double mean_of(std::span<const double> w) {
    double m = 0.0;
    for (double v : w) m += v;
    return w.empty() ? 0.0 : m / static_cast<double>(w.size());
}

/// True when `w` is constant up to rounding relative to `scale`.
inline bool is_flat(std::span<const double> w, double scale) {
    const double m = mean_of(w);
    const double tol = 1e-9 * std::max(1.0, scale);
    return std::all_of(w.begin(), w.end(), [&](double v) { return std::abs(v - m) <= tol; });
}

/// Optimisation coordinates: tanh-partials for phi, then theta, then the
/// mean offset in units of the series' standard deviation.
struct Layout {
    ArimaSpec spec;
    double mean0 = 0.0;
    double scale = 1.0;

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(spec.p + spec.q + (spec.with_constant ? 1 : 0));
    }

    void decode(std::span<const double> x, std::vector<double>& phi, std::vector<double>& theta, double& mean) const {
        const auto p = static_cast<std::size_t>(spec.p);
        const auto q = static_cast<std::size_t>(spec.q);
        phi = constrain(x.subspan(0, p));
        theta = constrain(x.subspan(p, q));
        mean = spec.with_constant ? mean0 + scale * x[p + q] : 0.0;
    }
};

inline double css_residual_sum(std::span<const double> w, std::span<const double> phi, std::span<const double> theta,
                               double mean, std::size_t& count) {
    const std::size_t n = w.size();
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    std::vector<double> e(n, 0.0);
    double ss = 0.0;
    count = 0;
    for (std::size_t t = p; t < n; ++t) {
        double v = w[t] - mean;
        for (std::size_t i = 0; i < p; ++i) v -= phi[i] * (w[t - 1 - i] - mean);
        for (std::size_t j = 0; j < q && j < t; ++j) v += theta[j] * e[t - 1 - j];
        e[t] = v;
        ss += v * v;
        ++count;
    }
    return ss;
}

}  // namespace detail

/// Conditional-sum-of-squares estimate used to start exact maximum
/// likelihood. Itself started from Yule-Walker AR coefficients, zero MA
/// coefficients and the sample mean. `s` is the undifferenced series.
/// sigma2 is the CSS residual variance; loglik and bic are left at zero.
inline ArimaFit css_estimate(std::span<const double> s, const ArimaSpec& spec) {
    spec.validate();
    const auto w = series::difference(s, spec.d);
    const auto p = static_cast<std::size_t>(spec.p);
    const auto q = static_cast<std::size_t>(spec.q);

    detail::Layout layout{spec, spec.with_constant ? detail::mean_of(w) : 0.0, 1.0};
    {
        double var = 0.0;
        for (double v : w) var += (v - layout.mean0) * (v - layout.mean0);
        var /= static_cast<double>(w.size());
        layout.scale = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    std::vector<double> x0(layout.size(), 0.0);
    if (p > 0 && w.size() > p) {
        try {
            const auto partial = pacf(w, p);
            const double cap = std::tanh(max_unconstrained);
            for (std::size_t i = 0; i < p; ++i) x0[i] = std::atanh(std::clamp(partial[i], -cap, cap));
        } catch (const ZeroVariance&) {
        }
    }

    auto objective = [&](std::span<const double> x) {
        std::vector<double> phi, theta;
        double mean = 0.0;
        layout.decode(x, phi, theta, mean);
        std::size_t count = 0;
        const double ss = detail::css_residual_sum(w, phi, theta, mean, count);
        return count > 0 ? std::log(ss / static_cast<double>(count)) : std::numeric_limits<double>::infinity();
    };
    NelderMeadOptions opt;
    opt.max_evaluations = 200 * std::max<std::size_t>(layout.size(), 1);
    auto res = nelder_mead(objective, x0, opt);

    ArimaFit start;
    start.spec = spec;
    double mean = 0.0;
    layout.decode(res.x, start.phi, start.theta, mean);
    std::size_t count = 0;
    const double ss = detail::css_residual_sum(w, start.phi, start.theta, mean, count);
    start.sigma2 = count > 0 ? ss / static_cast<double>(count) : 1.0;
    double ar_sum = 1.0;
    for (double c : start.phi) ar_sum -= c;
    start.mu = mean * ar_sum;
    start.n_eff = w.size();
    return start;
}

/// Exact maximum-likelihood ARIMA fit of the undifferenced series `s`.
///
/// The series is differenced d times; the ARMA-plus-constant likelihood of the
/// result is evaluated by the Kalman filter with sigma^2 concentrated out, and
/// maximised by Nelder-Mead over tanh-reparameterised partial
/// autocorrelations, so every candidate is stationary and invertible. The
/// simplex starts at the CSS estimate; if it does not converge within
/// 200 evaluations per parameter it restarts once from its best point.
inline ArimaFit fit(std::span<const double> s, const ArimaSpec& spec) {
    spec.validate();
    const std::size_t min_len = static_cast<std::size_t>(spec.d + spec.p + spec.q + 10);
    if (s.size() < min_len)
        throw SeriesTooShort(spec.str() + " needs at least " + std::to_string(min_len) + " observations, got " +
                             std::to_string(s.size()));
    const auto w = series::difference(s, spec.d);
    double scale = 0.0;
    for (double v : s) scale = std::max(scale, std::abs(v));
    if (detail::is_flat(w, scale)) throw DegenerateSeries();

    const ArimaFit start = css_estimate(s, spec);

    detail::Layout layout{spec, start.mean(), 1.0};
    {
        const double m = detail::mean_of(w);
        double var = 0.0;
        for (double v : w) var += (v - m) * (v - m);
        layout.scale = std::sqrt(var / static_cast<double>(w.size()));
    }
    std::vector<double> x0;
    {
        auto a = unconstrain(start.phi);
        auto b = unconstrain(start.theta);
        x0.insert(x0.end(), a.begin(), a.end());
        x0.insert(x0.end(), b.begin(), b.end());
        if (spec.with_constant) x0.push_back(0.0);
    }

    std::vector<double> centred(w.size());
    auto objective = [&](std::span<const double> x) {
        std::vector<double> phi, theta;
        double mean = 0.0;
        layout.decode(x, phi, theta, mean);
        for (std::size_t t = 0; t < w.size(); ++t) centred[t] = w[t] - mean;
        const auto f = kalman_filter(ArmaStateSpace(phi, theta), centred);
        if (!f.ok || !(f.sum_sq > 0.0)) return std::numeric_limits<double>::infinity();
        return -concentrated_loglik(f);
    };

    NelderMeadOptions opt;
    opt.max_evaluations = 200 * std::max<std::size_t>(layout.size(), 1);
    auto res = nelder_mead(objective, x0, opt);
    if (!res.converged) {
        auto x1 = res.x;
        opt.initial_step = 0.05;
        auto again = nelder_mead(objective, x1, opt);
        again.evaluations += res.evaluations;
        res = std::move(again);
    }
    if (!res.converged || !std::isfinite(res.value))
        throw OptimizerFailed(spec.str() + ": simplex did not converge after " + std::to_string(res.evaluations) +
                              " evaluations (best -loglik " + std::to_string(res.value) + ")");

    ArimaFit out;
    out.spec = spec;
    double mean = 0.0;
    layout.decode(res.x, out.phi, out.theta, mean);
    for (std::size_t t = 0; t < w.size(); ++t) centred[t] = w[t] - mean;
    const auto f = kalman_filter(ArmaStateSpace(out.phi, out.theta), centred);
    out.sigma2 = f.sum_sq / static_cast<double>(f.n);
    if (!(out.sigma2 > 0.0)) throw DegenerateSeries();
    out.loglik = gaussian_loglik(f, out.sigma2);
    double ar_sum = 1.0;
    for (double c : out.phi) ar_sum -= c;
    out.mu = mean * ar_sum;
    out.n_eff = w.size();
    out.bic = bic(spec, out.loglik, out.n_eff);
    return out;
}

/// Point forecasts with their forecast-error variances.
struct ForecastResult {
    std::vector<double> mean;
    std::vector<double> variance;
};

/// Minimum-mean-square-error forecasts h steps past the end of `s` (the
/// undifferenced series the fit came from, or an extension of it). The
/// differenced process is filtered to the end of the data and projected
/// forward, then integrated back to levels. Variances use the psi weights of
/// the full ARIMA operator.
inline ForecastResult forecast_with_variance(const ArimaFit& model, std::span<const double> s, std::size_t h) {
    const auto d = static_cast<std::size_t>(model.spec.d);
    if (s.size() <= d)
        throw SeriesTooShort("forecast needs more than " + std::to_string(d) + " observations, got " +
                             std::to_string(s.size()));
    if (h == 0) return {};
    const auto w = series::difference(s, model.spec.d);
    const double mean = model.mean();
    std::vector<double> centred(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) centred[t] = w[t] - mean;
    const ArmaStateSpace ss(model.phi, model.theta);
    auto f = kalman_filter(ss, centred);
    if (!f.ok) throw NonStationaryParams("cannot filter with non-stationary parameters");

    std::vector<double> wf(h);
    auto a = f.state;
    for (std::size_t k = 0; k < h; ++k) {
        wf[k] = mean + a[0];
        ss.predict_state(a);
    }
    ForecastResult out;
    out.mean = series::integrate_forward(wf, s.subspan(s.size() - d));

    const auto psi = psi_weights(model.phi, model.theta, model.spec.d, h);
    out.variance.resize(h);
    double acc = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        acc += psi[k] * psi[k];
        out.variance[k] = model.sigma2 * acc;
    }
    return out;
}

inline std::vector<double> forecast(const ArimaFit& model, std::span<const double> s, std::size_t h) {
    return forecast_with_variance(model, s, h).mean;
}

/// Forecast for a series whose d-th difference is constant: the mean of the
/// differences is carried forward and integrated. This is the limit of the
/// MMSE forecast of any ARIMA(p, d, q) with constant as sigma^2 -> 0.
inline std::vector<double> drift_forecast(std::span<const double> s, int d, std::size_t h) {
    const auto w = series::difference(s, d);
    std::vector<double> wf(h, detail::mean_of(w));
    return series::integrate_forward(wf, s.subspan(s.size() - static_cast<std::size_t>(d)));
}

/// True when `s` differenced d times is constant up to rounding.
inline bool is_degenerate(std::span<const double> s, int d) {
    if (s.size() <= static_cast<std::size_t>(d)) return false;
    const auto w = series::difference(s, d);
    double scale = 0.0;
    for (double v : s) scale = std::max(scale, std::abs(v));
    return detail::is_flat(w, scale);
}

/// Fits every spec in the grid and keeps the lowest BIC. Ties go to the
/// smaller p+q+d, then smaller d, then smaller q. Specs whose fit fails are
/// skipped with a warning.
inline ArimaFit select_and_fit(std::span<const double> s, std::span<const ArimaSpec> grid) {
    if (grid.empty()) throw ConfigError("empty ARIMA grid");
    std::optional<ArimaFit> best;
    auto rank = [](const ArimaFit& f) {
        return std::make_tuple(f.bic, f.spec.p + f.spec.q + f.spec.d, f.spec.d, f.spec.q, f.spec.p,
                               f.spec.with_constant);
    };
    std::string failures;
    for (const auto& spec : grid) {
        try {
            auto f = fit(s, spec);
            if (!best || rank(f) < rank(*best)) best = std::move(f);
        } catch (const Error& e) {
            log::warn("order selection: " + spec.str() + " skipped: " + e.what());
            failures += (failures.empty() ? "" : "; ") + spec.str() + ": " + e.what();
        }
    }
    if (!best) throw AllFitsFailed("no candidate order could be fitted (" + failures + ")");
    return *best;
}

inline ArimaSpec select_order(std::span<const double> s, std::span<const ArimaSpec> grid) {
    return select_and_fit(s, grid).spec;
}

}  // namespace fuelcast::arima
