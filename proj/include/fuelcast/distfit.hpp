#pragma once

#include <cmath>
#include <span>

#include "fuelcast/error.hpp"

namespace fuelcast::distfit {

/// Normal distribution N(mu, sigma), sigma > 0.
class NormalDist {
public:
    NormalDist(double mu, double sigma) : mu_(mu), sigma_(sigma) {
        if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) throw DegenerateDistribution();
    }

    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] double sigma() const { return sigma_; }

    bool operator==(const NormalDist&) const = default;

private:
    double mu_;
    double sigma_;
};

/// Maximum-likelihood normal fit: sample mean and the 1/n standard deviation.
inline NormalDist fit_normal(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw TooFewValues(n);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / static_cast<double>(n));
    if (!(sigma > 0.0)) throw DegenerateDistribution();
    return {mean, sigma};
}

/// KL(p || q) in nats, closed form for two normals.
inline double kl_gaussian(const NormalDist& p, const NormalDist& q) {
    const double dm = p.mu() - q.mu();
    const double s1 = p.sigma();
    const double s2 = q.sigma();
    return std::log(s2 / s1) + (s1 * s1 + dm * dm) / (2.0 * s2 * s2) - 0.5;
}

/// KL(p || q) + KL(q || p).
inline double symmetric_kl(const NormalDist& p, const NormalDist& q) {
    return kl_gaussian(p, q) + kl_gaussian(q, p);
}

}  // namespace fuelcast::distfit
