#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fuelcast/error.hpp"

namespace fuelcast::arima {

/// Sample autocorrelations for lags 0..max_lag, 1/n autocovariance normalisation.
inline std::vector<double> acf(std::span<const double> s, std::size_t max_lag) {
    const std::size_t n = s.size();
    if (max_lag == 0 || n <= max_lag)
        throw TooShort("acf: need more than " + std::to_string(max_lag) + " observations, got " + std::to_string(n));
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> c(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t) acc += (s[t] - mean) * (s[t - k] - mean);
        c[k] = acc / static_cast<double>(n);
    }
    if (!(c[0] > 0.0)) throw ZeroVariance();
    const double c0 = c[0];
    for (double& v : c) v /= c0;
    c[0] = 1.0;
    return c;
}

/// Durbin-Levinson on an autocorrelation sequence rho[0..K]. Returns the
/// partial autocorrelations for lags 1..K and, through `coeffs`, the order-K
/// Yule-Walker coefficients.
inline std::vector<double> durbin_levinson(std::span<const double> rho, std::vector<double>* coeffs = nullptr) {
    const std::size_t K = rho.size() - 1;
    std::vector<double> partial(K, 0.0);
    std::vector<double> phi;
    double v = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        double num = rho[k];
        for (std::size_t j = 1; j < k; ++j) num -= phi[j - 1] * rho[k - j];
        const double a = v > 0.0 ? num / v : 0.0;
        std::vector<double> next(k);
        for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - a * phi[k - j - 1];
        next[k - 1] = a;
        phi = std::move(next);
        v *= (1.0 - a * a);
        partial[k - 1] = a;
    }
    if (coeffs) *coeffs = phi;
    return partial;
}

/// Sample partial autocorrelations for lags 1..max_lag.
inline std::vector<double> pacf(std::span<const double> s, std::size_t max_lag) {
    const auto rho = acf(s, max_lag);
    return durbin_levinson(rho);
}

}  // namespace fuelcast::arima
