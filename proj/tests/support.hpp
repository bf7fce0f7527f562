#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fuelcast/distfit.hpp"

// Test-only oracles. Each is computed independently of the library code path
// it checks.

namespace fuelcast::testing {

/// Autocovariances gamma(0..max_lag) of a causal ARMA(p, q) with unit
/// innovation variance, from a long psi-weight expansion (minus-sign MA).
inline std::vector<double> arma_autocovariance(const std::vector<double>& phi, const std::vector<double>& theta,
                                               std::size_t max_lag, std::size_t terms = 6000) {
    std::vector<double> psi(terms, 0.0);
    psi[0] = 1.0;
    for (std::size_t j = 1; j < terms; ++j) {
        double v = j <= theta.size() ? -theta[j - 1] : 0.0;
        for (std::size_t i = 1; i <= phi.size() && i <= j; ++i) v += phi[i - 1] * psi[j - i];
        psi[j] = v;
    }
    std::vector<double> g(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k)
        for (std::size_t j = 0; j + k < terms; ++j) g[k] += psi[j] * psi[j + k];
    return g;
}

/// Gaussian log density of x under the stationary ARMA model, evaluated with
/// the full n x n covariance matrix.
inline double dense_arma_loglik(const std::vector<double>& phi, const std::vector<double>& theta, double mean,
                                double sigma2, const std::vector<double>& x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto g = arma_autocovariance(phi, theta, x.size());
    Eigen::MatrixXd S(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) S(i, j) = sigma2 * g[static_cast<std::size_t>(std::abs(i - j))];
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = x[static_cast<std::size_t>(i)] - mean;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    const Eigen::MatrixXd L = llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) logdet += 2.0 * std::log(L(i, i));
    const double quad = v.dot(llt.solve(v));
    return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

/// Least-squares fit of y_t = a + b y_{t-1}; returns {a, b}.
inline std::pair<double, double> ols_ar1(const std::vector<double>& y) {
    const std::size_t n = y.size() - 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        sx += y[t - 1];
        sy += y[t];
        sxx += y[t - 1] * y[t - 1];
        sxy += y[t - 1] * y[t];
    }
    const double N = static_cast<double>(n);
    const double b = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    return {(sy - b * sx) / N, b};
}

/// KL(p || q) as the integral of p ln(p / q), by composite Simpson over
/// mu_p +/- 14 sigma_p.
inline double kl_quadrature(const distfit::NormalDist& p, const distfit::NormalDist& q, int panels = 20000) {
    auto logpdf = [](const distfit::NormalDist& d, double x) {
        const double z = (x - d.mu()) / d.sigma();
        return -0.5 * z * z - std::log(d.sigma()) - 0.5 * std::log(2.0 * std::numbers::pi);
    };
    const double a = p.mu() - 14.0 * p.sigma();
    const double b = p.mu() + 14.0 * p.sigma();
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double x = a + h * i;
        const double lp = logpdf(p, x);
        const double f = std::exp(lp) * (lp - logpdf(q, x));
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sum * h / 3.0;
}

/// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& stem) {
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() / (stem + "_" + std::to_string(stamp));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fuelcast::testing
