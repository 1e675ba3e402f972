#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsf/error.hpp"
#include "tsf/series.hpp"

namespace tsf {

using OptionalSeries = std::vector<std::optional<double>>;

/// Classical additive decomposition: source = trend + seasonal + random.
///
/// trend and random are absent for the first and last frequency/2 positions,
/// where the centered moving-average window leaves the series.
struct Decomposition {
    TimeSeries source;
    OptionalSeries trend;
    std::vector<double> seasonal_figures;  // one per cycle position; [0] is January for monthly data
    std::vector<double> seasonal;
    OptionalSeries random;

    /// Seasonal figure for a calendar stamp.
    [[nodiscard]] double figure_for(MonthStamp s) const {
        const long f = static_cast<long>(seasonal_figures.size());
        return seasonal_figures[static_cast<std::size_t>(((s.serial() % f) + f) % f)];
    }
};

namespace detail {

inline std::size_t cycle_position(MonthStamp s, int frequency) {
    const long f = frequency;
    return static_cast<std::size_t>(((s.serial() % f) + f) % f);
}

}  // namespace detail

/// Symmetric moving average that annihilates a period-`frequency` pattern.
///
/// Even frequency f uses the 2xf filter (f+1 taps, half weight at both ends);
/// odd frequency uses the plain f-tap average.
inline OptionalSeries centered_ma(const TimeSeries& series) {
    const int f = series.frequency();
    const std::size_t n = series.size();
    const std::size_t min_len = static_cast<std::size_t>(f) + 1;
    if (n < min_len) {
        throw InsufficientDataError("centered moving average needs at least " +
                                    std::to_string(min_len) + " points, got " +
                                    std::to_string(n));
    }
    const auto x = series.values();
    const std::size_t half = static_cast<std::size_t>(f / 2);
    OptionalSeries trend(n);
    for (std::size_t i = half; i + half < n; ++i) {
        double acc = 0.0;
        if (f % 2 == 0) {
            acc = 0.5 * (x[i - half] + x[i + half]);
            for (std::size_t j = i - half + 1; j < i + half; ++j) acc += x[j];
        } else {
            for (std::size_t j = i - half; j <= i + half; ++j) acc += x[j];
        }
        trend[i] = acc / f;
    }
    return trend;
}

/// Zero-sum seasonal figures: per-cycle-position mean of (x - trend), centered.
inline std::vector<double> seasonal_figures(const TimeSeries& series, const OptionalSeries& trend) {
    const int f = series.frequency();
    if (trend.size() != series.size()) {
        throw RangeError("trend length " + std::to_string(trend.size()) +
                         " does not match series length " + std::to_string(series.size()));
    }
    std::vector<double> sum(static_cast<std::size_t>(f), 0.0);
    std::vector<int> count(static_cast<std::size_t>(f), 0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!trend[i]) continue;
        const auto k = detail::cycle_position(series.stamp_at(i), f);
        sum[k] += series[i] - *trend[i];
        ++count[k];
    }
    std::vector<double> fig(static_cast<std::size_t>(f));
    double mean = 0.0;
    for (std::size_t k = 0; k < fig.size(); ++k) {
        if (count[k] == 0) {
            std::string label = f == 12 ? MonthStamp(2000, static_cast<int>(k) + 1).str().substr(5)
                                        : std::to_string(k);
            throw InsufficientDataError("no detrended value for cycle position " + label);
        }
        fig[k] = sum[k] / count[k];
        mean += fig[k];
    }
    mean /= f;
    for (double& v : fig) v -= mean;
    return fig;
}

inline Decomposition decompose(const TimeSeries& series) {
    const std::size_t min_len = 2 * static_cast<std::size_t>(series.frequency());
    if (series.size() < min_len) {
        throw InsufficientDataError("decomposition needs at least " + std::to_string(min_len) +
                                    " points (two full cycles), got " +
                                    std::to_string(series.size()));
    }
    auto trend = centered_ma(series);
    auto figures = seasonal_figures(series, trend);
    std::vector<double> seasonal(series.size());
    OptionalSeries random(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        seasonal[i] = figures[detail::cycle_position(series.stamp_at(i), series.frequency())];
        if (trend[i]) random[i] = series[i] - *trend[i] - seasonal[i];
    }
    return {series, std::move(trend), std::move(figures), std::move(seasonal), std::move(random)};
}

enum class Component { trend, seasonal, random };

inline const char* to_string(Component c) {
    switch (c) {
        case Component::trend: return "trend";
        case Component::seasonal: return "seasonal";
        case Component::random: return "random";
    }
    return "?";
}

/// Share of the aggregate carried by one component, in percent.
struct ContributionStats {
    Component component;
    std::vector<MonthStamp> stamps;
    std::vector<double> percentages;
    SummaryStats stats;
    MonthStamp argmax_stamp;
    MonthStamp argmin_stamp;

    /// Plain mean for the trend, mean of absolute values for the signed components.
    [[nodiscard]] double reported_mean() const {
        return component == Component::trend ? stats.mean : stats.mean_abs;
    }
};

/// Percent contribution 100 * component / source over the positions where the
/// decomposition is complete (trend defined), for all three components alike.
inline ContributionStats contribution(const TimeSeries& series, const Decomposition& dec,
                                      Component which) {
    ContributionStats out{which, {}, {}, {}, {}, {}};
    std::size_t imax = 0;
    std::size_t imin = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!dec.trend[i]) continue;
        double value = 0.0;
        switch (which) {
            case Component::trend: value = *dec.trend[i]; break;
            case Component::seasonal: value = dec.seasonal[i]; break;
            case Component::random: value = *dec.random[i]; break;
        }
        if (series[i] == 0.0) {
            throw DomainError("zero aggregate value at " + series.stamp_at(i).str());
        }
        const double pct = 100.0 * value / series[i];
        if (out.percentages.empty() || pct > out.percentages[imax]) imax = out.percentages.size();
        if (out.percentages.empty() || pct < out.percentages[imin]) imin = out.percentages.size();
        out.stamps.push_back(series.stamp_at(i));
        out.percentages.push_back(pct);
    }
    if (out.percentages.empty()) {
        throw InsufficientDataError(std::string(to_string(which)) +
                                    " component is undefined everywhere");
    }
    out.stats = summary(out.percentages);
    out.argmax_stamp = out.stamps[imax];
    out.argmin_stamp = out.stamps[imin];
    return out;
}

}  // namespace tsf
