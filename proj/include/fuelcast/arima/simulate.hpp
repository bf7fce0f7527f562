#pragma once

#include <random>
#include <span>
#include <vector>

#include "fuelcast/arima/spec.hpp"
#include "fuelcast/series.hpp"

namespace fuelcast::arima {

/// Draws n observations of phi(B) (1-B)^d y_t = mu + theta(B) e_t with
/// e_t ~ N(0, sigma2). The ARMA part is run through `burn_in` extra steps
/// from zero so the returned stretch is close to stationary. For d > 0 the
/// levels start at zero.
template <class Rng>
std::vector<double> simulate(const ArimaFit& model, std::size_t n, Rng& rng, std::size_t burn_in = 500) {
    std::normal_distribution<double> noise(0.0, std::sqrt(model.sigma2));
    const std::size_t p = model.phi.size();
    const std::size_t q = model.theta.size();
    const auto d = static_cast<std::size_t>(model.spec.d);
    const std::size_t total = n - std::min(n, d) + burn_in;
    std::vector<double> w(total, 0.0);
    std::vector<double> e(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        e[t] = noise(rng);
        double v = model.mu + e[t];
        for (std::size_t i = 0; i < p && i < t; ++i) v += model.phi[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < q && j < t; ++j) v -= model.theta[j] * e[t - 1 - j];
        w[t] = v;
    }
    std::vector<double> out(w.begin() + static_cast<std::ptrdiff_t>(burn_in), w.end());
    if (d == 0) return out;
    std::vector<double> heads(d, 0.0);
    return series::integrate(out, heads);
}

}  // namespace fuelcast::arima
