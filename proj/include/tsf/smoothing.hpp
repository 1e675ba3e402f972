#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tsf/decomposition.hpp"
#include "tsf/error.hpp"
#include "tsf/forecast.hpp"
#include "tsf/optimize.hpp"
#include "tsf/regression.hpp"
#include "tsf/series.hpp"

namespace tsf {

/// Which exponential-smoothing components are active. The level is always present.
struct SmoothingSpec {
    bool use_trend = true;
    bool use_seasonal = true;
    int frequency = 12;

    static SmoothingSpec holt_winters(int frequency = 12) { return {true, true, frequency}; }
    static SmoothingSpec holt() { return {true, false, 12}; }
};

struct SmoothingWeights {
    double alpha = 0.3;
    std::optional<double> beta;   // present iff use_trend
    std::optional<double> gamma;  // present iff use_seasonal
};

struct SmoothingState {
    double level = 0.0;
    double slope = 0.0;
    std::vector<double> seasonal;  // indexed by cycle position (0 = January for monthly data)
};

/// Seed state plus the position of the first observation the recursion consumes.
struct SmoothingStart {
    SmoothingState state;
    std::size_t first_index = 0;
};

struct SmoothingModel {
    SmoothingSpec spec;
    SmoothingWeights weights;
    double level = 0.0;
    double slope = 0.0;
    std::vector<double> seasonal_state;
    double sse = 0.0;
    std::size_t n_fit = 0;
    MonthStamp origin;  // stamp of the last observation absorbed
};

namespace detail {

inline void check_spec(const TimeSeries& series, const SmoothingSpec& spec) {
    if (spec.use_seasonal) {
        if (spec.frequency < 2) {
            throw RangeError("seasonal smoothing needs frequency >= 2, got " +
                             std::to_string(spec.frequency));
        }
        if (spec.frequency != series.frequency()) {
            throw RangeError("smoothing frequency " + std::to_string(spec.frequency) +
                             " does not match series frequency " +
                             std::to_string(series.frequency()));
        }
        const std::size_t need = 2 * static_cast<std::size_t>(spec.frequency);
        if (series.size() < need) {
            throw InsufficientDataError("seasonal smoothing needs at least " +
                                        std::to_string(need) + " points, got " +
                                        std::to_string(series.size()));
        }
    } else if (series.size() < 3) {
        throw InsufficientDataError("smoothing needs at least 3 points, got " +
                                    std::to_string(series.size()));
    }
}

}  // namespace detail

/// Conventional start-up state.
///
/// Seasonal: figures and centered-MA trend from decomposing the first two
/// cycles; level/slope from a line through that trend, with the level read off
/// the line at the last position before the recursion starts (end of the first
/// full cycle). Non-seasonal: level x[1], slope x[1]-x[0], start at 2
/// (level only: level x[0], start at 1).
inline SmoothingStart hw_initial_state(const TimeSeries& series, const SmoothingSpec& spec) {
    detail::check_spec(series, spec);
    SmoothingStart start;
    const auto x = series.values();
    if (spec.use_seasonal) {
        const std::size_t f = static_cast<std::size_t>(spec.frequency);
        const TimeSeries head(series.start(), std::vector<double>(x.begin(), x.begin() + 2 * f),
                              spec.frequency);
        const auto dec = decompose(head);
        std::vector<double> trend;
        for (const auto& t : dec.trend) {
            if (t) trend.push_back(*t);
        }
        const auto line = ols_fit(trend);
        start.state.slope = line.slope;
        // line index 0 is the first defined trend point, position f/2
        const double anchor = static_cast<double>(f - 1 - f / 2);
        start.state.level = line.at(anchor);
        if (!spec.use_trend) start.state.slope = 0.0;
        start.state.seasonal = dec.seasonal_figures;
        start.first_index = f;
    } else if (spec.use_trend) {
        start.state.level = x[1];
        start.state.slope = x[1] - x[0];
        start.first_index = 2;
    } else {
        start.state.level = x[0];
        start.first_index = 1;
    }
    if (start.state.seasonal.empty()) {
        start.state.seasonal.assign(static_cast<std::size_t>(std::max(spec.frequency, 1)), 0.0);
    }
    return start;
}

/// Runs the smoothing recursion with fixed weights from a given start.
/// Disabled components are dropped from the recursion entirely.
inline SmoothingModel hw_filter(const TimeSeries& series, const SmoothingSpec& spec,
                                const SmoothingWeights& w, const SmoothingStart& start) {
    const double a = w.alpha;
    const double b = spec.use_trend ? w.beta.value_or(0.0) : 0.0;
    const double g = spec.use_seasonal ? w.gamma.value_or(0.0) : 0.0;
    const int f = std::max(spec.frequency, 1);

    double level = start.state.level;
    double slope = spec.use_trend ? start.state.slope : 0.0;
    std::vector<double> season = start.state.seasonal;
    season.resize(static_cast<std::size_t>(f), 0.0);

    double sse = 0.0;
    std::size_t n_fit = 0;
    for (std::size_t t = start.first_index; t < series.size(); ++t) {
        const double xt = series[t];
        const std::size_t k = detail::cycle_position(series.stamp_at(t), f);
        const double s_prev = spec.use_seasonal ? season[k] : 0.0;
        const double predicted = level + slope + s_prev;
        const double err = xt - predicted;
        sse += err * err;
        ++n_fit;

        const double new_level = a * (xt - s_prev) + (1.0 - a) * (level + slope);
        if (spec.use_trend) slope = b * (new_level - level) + (1.0 - b) * slope;
        if (spec.use_seasonal) season[k] = g * (xt - new_level) + (1.0 - g) * s_prev;
        level = new_level;
    }

    SmoothingModel m;
    m.spec = spec;
    m.weights.alpha = a;
    if (spec.use_trend) m.weights.beta = b;
    if (spec.use_seasonal) m.weights.gamma = g;
    m.level = level;
    m.slope = slope;
    m.seasonal_state = std::move(season);
    m.sse = sse;
    m.n_fit = n_fit;
    m.origin = series.end();
    return m;
}

namespace detail {

inline SmoothingWeights unpack_weights(const SmoothingSpec& spec, const std::vector<double>& p) {
    SmoothingWeights w;
    std::size_t i = 0;
    w.alpha = p[i++];
    if (spec.use_trend) w.beta = p[i++];
    if (spec.use_seasonal) w.gamma = p[i++];
    return w;
}

}  // namespace detail

/// Fits the smoothing weights by minimizing in-sample one-step SSE.
///
/// A 0.1-step grid over the active weights seeds a box-constrained
/// Nelder-Mead refinement on [0,1]^k.
inline SmoothingModel hw_fit(const TimeSeries& series, const SmoothingSpec& spec) {
    const auto start = hw_initial_state(series, spec);
    const std::size_t dims = 1 + (spec.use_trend ? 1 : 0) + (spec.use_seasonal ? 1 : 0);

    auto objective = [&](const std::vector<double>& p) {
        return hw_filter(series, spec, detail::unpack_weights(spec, p), start).sse;
    };

    std::vector<double> best_p(dims, 0.0);
    double best_sse = std::numeric_limits<double>::infinity();
    std::vector<int> idx(dims, 0);
    std::vector<double> p(dims);
    for (;;) {
        for (std::size_t i = 0; i < dims; ++i) p[i] = idx[i] / 10.0;
        const double v = objective(p);
        if (std::isfinite(v) && v < best_sse) {
            best_sse = v;
            best_p = p;
        }
        std::size_t i = 0;
        while (i < dims && ++idx[i] > 10) idx[i++] = 0;
        if (i == dims) break;
    }
    if (!std::isfinite(best_sse)) {
        throw NumericalError("smoothing SSE is not finite anywhere on the weight grid", best_p);
    }

    NelderMeadOptions opt;
    opt.initial_step = 0.05;
    opt.bounds = Box{std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0)};
    auto res = nelder_mead(objective, best_p, opt);
    if (!(res.value <= best_sse)) res.x = best_p;

    auto model = hw_filter(series, spec, detail::unpack_weights(spec, res.x), start);
    if (!std::isfinite(model.sse)) {
        throw NumericalError("smoothing fit produced a non-finite SSE", res.x);
    }
    return model;
}

/// level + h*slope + seasonal figure of the target month.
inline ForecastResult hw_forecast(const SmoothingModel& model, int horizon) {
    if (horizon < 1) throw RangeError("horizon must be >= 1, got " + std::to_string(horizon));
    const int f = std::max(model.spec.frequency, 1);
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int h = 1; h <= horizon; ++h) {
        double v = model.level;
        if (model.spec.use_trend) v += h * model.slope;
        if (model.spec.use_seasonal) {
            v += model.seasonal_state[detail::cycle_position(model.origin.add_months(h), f)];
        }
        out[static_cast<std::size_t>(h - 1)] = v;
    }
    return ForecastResult::from_values(model.origin, out);
}

}  // namespace tsf
