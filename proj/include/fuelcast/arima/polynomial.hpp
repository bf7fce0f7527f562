#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace fuelcast::arima {

// Lag polynomials are passed as their coefficients c_1..c_k of 1 - sum c_i z^i.

/// Maps partial autocorrelations in (-1, 1) to polynomial coefficients
/// (Durbin-Levinson recursion). The image is exactly the set of polynomials
/// with all roots outside the unit circle.
inline std::vector<double> coefficients_from_partials(std::span<const double> partials) {
    std::vector<double> c;
    c.reserve(partials.size());
    for (std::size_t k = 0; k < partials.size(); ++k) {
        const double r = partials[k];
        std::vector<double> next(k + 1);
        for (std::size_t j = 0; j < k; ++j) next[j] = c[j] - r * c[k - 1 - j];
        next[k] = r;
        c = std::move(next);
    }
    return c;
}

/// Inverse of coefficients_from_partials (step-down recursion). Returns nullopt
/// when a partial reaches the unit circle, i.e. the polynomial has a root on or
/// inside it.
inline std::optional<std::vector<double>> partials_from_coefficients(std::span<const double> coeffs) {
    std::vector<double> c(coeffs.begin(), coeffs.end());
    std::vector<double> partials(c.size());
    for (std::size_t k = c.size(); k-- > 0;) {
        const double r = c[k];
        if (!(std::abs(r) < 1.0)) return std::nullopt;
        partials[k] = r;
        const double denom = 1.0 - r * r;
        std::vector<double> prev(k);
        for (std::size_t j = 0; j < k; ++j) prev[j] = (c[j] + r * c[k - 1 - j]) / denom;
        c = std::move(prev);
    }
    return partials;
}

/// All roots of 1 - sum c_i z^i strictly outside the unit circle.
inline bool roots_outside_unit_circle(std::span<const double> coeffs) {
    return partials_from_coefficients(coeffs).has_value();
}

/// Unconstrained reals -> stationary/invertible coefficients via tanh on the partials.
inline constexpr double max_unconstrained = 7.0;

inline std::vector<double> constrain(std::span<const double> u) {
    std::vector<double> r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        r[i] = std::tanh(std::clamp(u[i], -max_unconstrained, max_unconstrained));
    return coefficients_from_partials(r);
}

/// Inverse of `constrain`. Coefficients outside the region are shrunk towards
/// zero until they fit.
inline std::vector<double> unconstrain(std::span<const double> coeffs) {
    std::vector<double> c(coeffs.begin(), coeffs.end());
    auto partials = partials_from_coefficients(c);
    for (int tries = 0; !partials && tries < 60; ++tries) {
        for (double& x : c) x *= 0.9;
        partials = partials_from_coefficients(c);
    }
    if (!partials) partials = std::vector<double>(c.size(), 0.0);
    std::vector<double> u(partials->size());
    const double cap = std::tanh(max_unconstrained);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::atanh(std::clamp((*partials)[i], -cap, cap));
    return u;
}

/// MA(infinity) weights psi_0..psi_{count-1} of phi(B)(1-B)^d w_t = theta(B) e_t.
inline std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta, int d,
                                       std::size_t count) {
    // Full AR operator phi(B)(1-B)^d as 1 - sum a_i B^i.
    std::vector<double> poly{1.0};
    for (double c : phi) poly.push_back(-c);
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> psi(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        double v = j == 0 ? 1.0 : (j <= theta.size() ? -theta[j - 1] : 0.0);
        for (std::size_t i = 1; i < poly.size() && i <= j; ++i) v -= poly[i] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

}  // namespace fuelcast::arima
