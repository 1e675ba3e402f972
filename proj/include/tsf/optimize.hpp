#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace tsf {

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    void project(std::vector<double>& x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
};

struct NelderMeadOptions {
    double initial_step = 0.1;  // per-coordinate offset of the initial simplex vertices
    double f_tol = 1e-10;       // relative spread of objective values across the simplex
    int max_iter = 500;
    int restarts = 1;           // rebuild the simplex around the optimum this many times
    std::optional<Box> bounds;  // vertices are clamped into the box
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

namespace detail {

template <class F>
NelderMeadResult nelder_mead_once(F& f, std::vector<double> x0, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    auto eval = [&](std::vector<double>& x) {
        if (opt.bounds) opt.bounds->project(x);
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        auto& v = simplex[i + 1];
        v[i] += opt.initial_step;
        // Step inward when the forward vertex would sit on (or past) the upper bound.
        if (opt.bounds && v[i] > opt.bounds->upper[i]) v[i] = x0[i] - opt.initial_step;
    }
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    NelderMeadResult res;
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];
        const double spread = fv[worst] - fv[best];
        if (std::isfinite(fv[worst]) &&
            spread <= opt.f_tol * (std::abs(fv[best]) + opt.f_tol)) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
        }
        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (xr[j] - centroid[j]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        for (std::size_t j = 0; j < n; ++j) {
            xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j])
                            : centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
        }
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            fv[i] = eval(simplex[i]);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
    res.value = *it;
    return res;
}

}  // namespace detail

/// Derivative-free minimization. Deterministic for a given start and options.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
    if (x0.empty()) {
        NelderMeadResult r;
        r.value = f(x0);
        r.converged = true;
        return r;
    }
    if (opt.bounds) opt.bounds->project(x0);
    auto best = detail::nelder_mead_once(f, std::move(x0), opt);
    for (int r = 0; r < opt.restarts; ++r) {
        auto again = detail::nelder_mead_once(f, best.x, opt);
        again.iterations += best.iterations;
        if (!(again.value < best.value)) {
            best.iterations = again.iterations;
            break;
        }
        best = std::move(again);
    }
    return best;
}

}  // namespace tsf
