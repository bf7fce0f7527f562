#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace fuelcast::arima {

struct NelderMeadOptions {
    std::size_t max_evaluations = 1000;
    double f_tolerance = 1e-8;  ///< stop when max f - min f over the simplex falls below this
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Minimises `f` with the Nelder-Mead simplex method (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). Non-finite objective values are
/// treated as +infinity. The starting point is a vertex of the initial
/// simplex, so the result is never worse than `x0`.
inline NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                                    std::span<const double> x0, const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    if (n == 0) {
        res.x = {};
        res.value = eval({});
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> pts(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto at = [&](const std::vector<double>& base, const std::vector<double>& worst, double coef,
                  std::vector<double>& out) {
        for (std::size_t j = 0; j < n; ++j) out[j] = base[j] + coef * (base[j] - worst[j]);
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        if (vals[worst] - vals[best] < opt.f_tolerance) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= opt.max_evaluations) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

        at(centroid, pts[worst], 1.0, xr);
        const double fr = eval(xr);
        if (fr < vals[best]) {
            at(centroid, pts[worst], 2.0, xe);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        // Contraction, outside if the reflection improved on the worst point.
        const bool outside = fr < vals[worst];
        at(centroid, pts[worst], outside ? 0.5 : -0.5, xc);
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            vals[i] = eval(pts[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    res.x = pts[best];
    res.value = vals[best];
    return res;
}

}  // namespace fuelcast::arima
