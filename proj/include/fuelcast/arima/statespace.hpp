#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "fuelcast/arima/polynomial.hpp"
#include "fuelcast/arima/spec.hpp"
#include "fuelcast/error.hpp"

namespace fuelcast::arima {

/// ARMA(p, q) in Harvey's state-space form with r = max(p, q + 1):
///   x_t     = Z a_t,                      Z = (1, 0, ..., 0)
///   a_{t+1} = T a_t + R e_{t+1},          R = (1, -theta_1, ..., -theta_{r-1})
/// with T holding the AR coefficients in its first column and an identity on
/// the superdiagonal. Innovations have unit variance here; sigma^2 scales out.
class ArmaStateSpace {
public:
    ArmaStateSpace(std::span<const double> phi, std::span<const double> theta)
        : r_(std::max(phi.size(), theta.size() + 1)), phi_(r_, 0.0), R_(r_, 0.0) {
        std::copy(phi.begin(), phi.end(), phi_.begin());
        R_[0] = 1.0;
        for (std::size_t j = 0; j < theta.size(); ++j) R_[j + 1] = -theta[j];
    }

    [[nodiscard]] std::size_t dim() const { return r_; }

    /// Stationary state covariance: solves P = T P T' + R R' through the
    /// Kronecker form (I - T (x) T) vec P = vec(R R'). Returns false when the
    /// system is singular.
    bool stationary_covariance(std::vector<double>& P) const {
        const std::size_t r = r_;
        const std::size_t m = r * r;
        std::vector<double> A(m * m, 0.0);
        std::vector<double> b(m);
        auto T = [&](std::size_t i, std::size_t j) {
            double v = (j == 0) ? phi_[i] : 0.0;
            if (j == i + 1) v += 1.0;
            return v;
        };
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                const std::size_t row = i * r + j;
                b[row] = R_[i] * R_[j];
                A[row * m + row] += 1.0;
                // (T P T')_{ij} = sum_{k,l} T_ik P_kl T_jl
                for (std::size_t k = 0; k < r; ++k) {
                    const double tik = T(i, k);
                    if (tik == 0.0) continue;
                    for (std::size_t l = 0; l < r; ++l) {
                        const double tjl = T(j, l);
                        if (tjl != 0.0) A[row * m + (k * r + l)] -= tik * tjl;
                    }
                }
            }
        // Gaussian elimination with partial pivoting.
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            for (std::size_t row = col + 1; row < m; ++row)
                if (std::abs(A[row * m + col]) > std::abs(A[piv * m + col])) piv = row;
            if (!(std::abs(A[piv * m + col]) > 1e-300)) return false;
            if (piv != col) {
                for (std::size_t k = 0; k < m; ++k) std::swap(A[col * m + k], A[piv * m + k]);
                std::swap(b[col], b[piv]);
            }
            for (std::size_t row = col + 1; row < m; ++row) {
                const double f = A[row * m + col] / A[col * m + col];
                if (f == 0.0) continue;
                for (std::size_t k = col; k < m; ++k) A[row * m + k] -= f * A[col * m + k];
                b[row] -= f * b[col];
            }
        }
        P.assign(m, 0.0);
        for (std::size_t row = m; row-- > 0;) {
            double s = b[row];
            for (std::size_t k = row + 1; k < m; ++k) s -= A[row * m + k] * P[k];
            P[row] = s / A[row * m + row];
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) {
                const double avg = 0.5 * (P[i * r + j] + P[j * r + i]);
                P[i * r + j] = P[j * r + i] = avg;
            }
        return std::isfinite(P[0]) && P[0] > 0.0;
    }

    /// a <- T a
    void predict_state(std::vector<double>& a) const {
        const double a0 = a[0];
        for (std::size_t i = 0; i + 1 < r_; ++i) a[i] = phi_[i] * a0 + a[i + 1];
        a[r_ - 1] = phi_[r_ - 1] * a0;
    }

    /// P <- T P T' + R R'
    void predict_covariance(std::vector<double>& P, std::vector<double>& work) const {
        const std::size_t r = r_;
        work.assign(r * r, 0.0);
        // work = T P
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < r; ++k)
                work[i * r + k] = phi_[i] * P[k] + (i + 1 < r ? P[(i + 1) * r + k] : 0.0);
        // P = work T' + R R'
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                P[i * r + j] = work[i * r] * phi_[j] + (j + 1 < r ? work[i * r + j + 1] : 0.0) + R_[i] * R_[j];
    }

private:
    std::size_t r_;
    std::vector<double> phi_;
    std::vector<double> R_;
};

/// Output of the prediction-error decomposition of a zero-mean ARMA series
/// (innovation variance 1).
struct FilterResult {
    double sum_log_f = 0.0;      ///< sum of log prediction variances
    double sum_sq = 0.0;         ///< sum of v_t^2 / F_t
    std::size_t n = 0;
    std::vector<double> state;   ///< a_{n+1|n}
    std::vector<double> cov;     ///< P_{n+1|n}, row-major
    bool ok = false;
};

/// Kalman filter over a zero-mean series x. `ok` is false when the parameters
/// do not admit a stationary initial covariance.
inline FilterResult kalman_filter(const ArmaStateSpace& model, std::span<const double> x) {
    FilterResult out;
    const std::size_t r = model.dim();
    std::vector<double> P;
    if (!model.stationary_covariance(P)) return out;
    std::vector<double> a(r, 0.0);
    std::vector<double> work;
    std::vector<double> col(r);
    for (double y : x) {
        const double v = y - a[0];
        const double F = P[0];
        if (!(F > 0.0) || !std::isfinite(F)) return out;
        out.sum_log_f += std::log(F);
        out.sum_sq += v * v / F;
        // Update: a += P[:,0] v / F ; P -= P[:,0] P[0,:] / F
        for (std::size_t i = 0; i < r; ++i) col[i] = P[i * r];
        for (std::size_t i = 0; i < r; ++i) {
            a[i] += col[i] * v / F;
            for (std::size_t j = 0; j < r; ++j) P[i * r + j] -= col[i] * col[j] / F;
        }
        model.predict_state(a);
        model.predict_covariance(P, work);
    }
    out.n = x.size();
    out.state = std::move(a);
    out.cov = std::move(P);
    out.ok = std::isfinite(out.sum_sq) && std::isfinite(out.sum_log_f);
    return out;
}

/// Gaussian log-likelihood for a given innovation variance.
inline double gaussian_loglik(const FilterResult& f, double sigma2) {
    const double n = static_cast<double>(f.n);
    return -0.5 * (n * std::log(2.0 * std::numbers::pi * sigma2) + f.sum_log_f + f.sum_sq / sigma2);
}

/// Log-likelihood with sigma^2 replaced by its maximiser sum_sq / n.
inline double concentrated_loglik(const FilterResult& f) {
    const double n = static_cast<double>(f.n);
    const double s2 = f.sum_sq / n;
    return -0.5 * (n * (std::log(2.0 * std::numbers::pi * s2) + 1.0) + f.sum_log_f);
}

/// Exact Gaussian log-likelihood of an already-differenced series `w` under
/// the ARMA(p, q)-plus-constant part of `params` (phi, theta, mu, sigma2).
inline double log_likelihood(const ArimaFit& params, std::span<const double> w) {
    const std::size_t p = params.phi.size();
    const std::size_t q = params.theta.size();
    if (w.size() < p + q + 1)
        throw SeriesTooShort("likelihood needs at least " + std::to_string(p + q + 1) + " observations, got " +
                             std::to_string(w.size()));
    if (!roots_outside_unit_circle(params.phi)) throw NonStationaryParams("AR polynomial is not stationary");
    if (!roots_outside_unit_circle(params.theta)) throw NonStationaryParams("MA polynomial is not invertible");
    if (!(params.sigma2 > 0.0)) throw NonStationaryParams("sigma2 must be positive");

    const double mean = params.mean();
    std::vector<double> x(w.begin(), w.end());
    for (double& v : x) v -= mean;
    auto f = kalman_filter(ArmaStateSpace(params.phi, params.theta), x);
    if (!f.ok) throw NonStationaryParams("state covariance is singular");
    return gaussian_loglik(f, params.sigma2);
}

}  // namespace fuelcast::arima
