#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsf/error.hpp"

namespace tsf {

/// Least-squares line against the 0-based position within the fitted window.
struct LinearModel {
    double intercept = 0.0;
    double slope = 0.0;
    double residual_sse = 0.0;
    std::size_t n = 0;

    [[nodiscard]] double at(double t) const noexcept { return intercept + slope * t; }
};

inline LinearModel ols_fit(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw InsufficientDataError("line fit needs at least 2 points, got " + std::to_string(n));
    }
    const double tbar = (static_cast<double>(n) - 1.0) / 2.0;
    double ybar = 0.0;
    for (double y : values) ybar += y;
    ybar /= static_cast<double>(n);
    double sty = 0.0;
    double stt = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - tbar;
        sty += dt * (values[t] - ybar);
        stt += dt * dt;
    }
    LinearModel m;
    m.n = n;
    m.slope = sty / stt;
    m.intercept = ybar - m.slope * tbar;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = values[t] - m.at(static_cast<double>(t));
        m.residual_sse += e * e;
    }
    return m;
}

/// intercept + slope * (from_index + h - 1) for h = 1..horizon.
inline std::vector<double> ols_extrapolate(const LinearModel& model, long from_index,
                                           int horizon) {
    if (horizon < 1) throw RangeError("horizon must be >= 1, got " + std::to_string(horizon));
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) out[static_cast<std::size_t>(h)] = model.at(static_cast<double>(from_index + h));
    return out;
}

}  // namespace tsf
