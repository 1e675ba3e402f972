#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsf/arima.hpp"
#include "tsf/decomposition.hpp"
#include "tsf/error.hpp"
#include "tsf/forecast.hpp"
#include "tsf/regression.hpp"
#include "tsf/series.hpp"
#include "tsf/smoothing.hpp"

namespace tsf {

/// The six forecasting protocols compared on a held-out year.
///
///   I    Holt-Winters (trend + additive season), one 12-step forecast
///   II   Holt-Winters refitted every month, 1-step forecasts
///   III  Holt trend forecast + past seasonal offsets, vs decomposed actuals
///   IV   OLS trend forecast + past seasonal offsets, vs decomposed actuals
///   V    ARIMA with automatic order, one 12-step forecast
///   VI   ARIMA with order re-selected every month, 1-step forecasts
enum class Method { I, II, III, IV, V, VI };

inline constexpr Method kAllMethods[] = {Method::I, Method::II, Method::III,
                                         Method::IV, Method::V, Method::VI};

inline const char* to_string(Method m) {
    switch (m) {
        case Method::I: return "I";
        case Method::II: return "II";
        case Method::III: return "III";
        case Method::IV: return "IV";
        case Method::V: return "V";
        case Method::VI: return "VI";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    for (Method m : kAllMethods) {
        if (s == to_string(m)) return m;
    }
    throw ParseError("unknown method '" + s + "' (expected I, II, III, IV, V or VI)", 0);
}

struct EvaluationRow {
    MonthStamp stamp;
    double actual = 0.0;
    double forecast = 0.0;
    double pct_error = 0.0;  // 100 * (forecast - actual) / actual
};

/// Error summary. min/max/mean/sd are over |pct_error| (sd with divisor n-1,
/// 0 for a single row); rmse is over raw forecast - actual.
struct Metrics {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    double rmse = 0.0;
};

struct MethodReport {
    Method method = Method::I;
    std::vector<EvaluationRow> rows;
    std::optional<Metrics> summary;  // absent only for an empty report
    std::vector<std::string> models;  // description of each fitted model, in fit order
};

inline EvaluationRow make_row(MonthStamp stamp, double actual, double forecast) {
    if (actual == 0.0) {
        throw DomainError("percent error undefined: actual value is zero at " + stamp.str());
    }
    return {stamp, actual, forecast, 100.0 * (forecast - actual) / actual};
}

inline Metrics metrics(std::span<const EvaluationRow> rows) {
    if (rows.empty()) throw EmptyInputError("metrics of an empty row set");
    std::vector<double> abs_pct;
    double sq = 0.0;
    for (const auto& r : rows) {
        if (r.actual == 0.0) {
            throw DomainError("percent error undefined: actual value is zero at " + r.stamp.str());
        }
        abs_pct.push_back(std::abs(r.pct_error));
        sq += (r.forecast - r.actual) * (r.forecast - r.actual);
    }
    const auto s = summary(abs_pct);
    return {s.min, s.max, s.mean, s.sd.value_or(0.0), std::sqrt(sq / static_cast<double>(rows.size()))};
}

/// How Methods III/IV add the training window's seasonal figure to the
/// forecast trend.
///
/// `magnitude` adds the figure's absolute value (the default);
/// `signed_figures` adds the figure itself.
enum class SeasonalOffsets { magnitude, signed_figures };

struct EvaluationOptions {
    int horizon = 12;
    SeasonalOffsets past_seasonal = SeasonalOffsets::magnitude;
    std::optional<ArimaOrder> arima_order;  // pin the order for V/VI instead of selecting it
    AutoOrderOptions order_search;
};

namespace detail {

inline MethodReport finish(Method m, std::vector<EvaluationRow> rows, std::vector<std::string> models) {
    MethodReport r{m, std::move(rows), std::nullopt, std::move(models)};
    if (!r.rows.empty()) r.summary = metrics(r.rows);
    return r;
}

inline void require_holdout(const TimeSeries& series, MonthStamp train_end, int horizon) {
    if (horizon < 1) throw RangeError("horizon must be >= 1, got " + std::to_string(horizon));
    if (!series.contains(train_end)) {
        throw RangeError("train end " + train_end.str() + " outside series span " +
                         series.start().str() + ".." + series.end().str());
    }
    const auto last = train_end.add_months(horizon);
    if (!series.contains(last)) {
        throw InsufficientDataError("evaluation needs " + std::to_string(horizon) +
                                    " actual values after " + train_end.str() + " (through " +
                                    last.str() + "); series ends " + series.end().str());
    }
}

inline std::string describe(const SmoothingModel& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s alpha=%.6f beta=%s gamma=%s",
                  m.spec.use_seasonal ? "holt-winters" : "holt", m.weights.alpha,
                  m.weights.beta ? std::to_string(*m.weights.beta).c_str() : "off",
                  m.weights.gamma ? std::to_string(*m.weights.gamma).c_str() : "off");
    return buf;
}

inline std::string describe(const ArimaModel& m) { return "arima" + m.order.str(); }

inline ArimaModel fit_arima(const TimeSeries& train, const EvaluationOptions& opt) {
    const ArimaOrder order = opt.arima_order ? *opt.arima_order : auto_order(train.values(), opt.order_search);
    return css_fit(train, order);
}

struct TrendWindow {
    TimeSeries trend;       // defined trend values of the training decomposition
    Decomposition training;
};

inline TrendWindow training_trend(const TimeSeries& train) {
    auto dec = decompose(train);
    std::vector<double> values;
    std::optional<MonthStamp> first;
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (!dec.trend[i]) continue;
        if (!first) first = train.stamp_at(i);
        values.push_back(*dec.trend[i]);
    }
    return {TimeSeries(*first, std::move(values), train.frequency()), std::move(dec)};
}

/// Methods III/IV: forecast trend + past seasonal offset, against decomposed actuals.
inline MethodReport trend_plus_season(Method which, const TimeSeries& series, const EvaluationOptions& opt, const std::vector<double>& trend_forecast,
                                      const TrendWindow& tw, std::vector<std::string> models) {
    const auto full = decompose(series);
    std::vector<EvaluationRow> rows;
    for (std::size_t h = 0; h < trend_forecast.size(); ++h) {
        const MonthStamp s = tw.trend.end().add_months(static_cast<long>(h) + 1);
        if (!series.contains(s) || !full.trend[series.index_of(s)]) {
            throw InsufficientDataError("decomposed actual (trend) undefined at " + s.str() +
                                        "; the series must extend half a cycle past the evaluation window");
        }
        const std::size_t i = series.index_of(s);
        const double actual = *full.trend[i] + full.seasonal[i];
        double offset = tw.training.figure_for(s);
        if (opt.past_seasonal == SeasonalOffsets::magnitude) offset = std::abs(offset);
        rows.push_back(make_row(s, actual, trend_forecast[h] + offset));
    }
    return finish(which, std::move(rows), std::move(models));
}

}  // namespace detail

inline MethodReport method_I(const TimeSeries& series, MonthStamp train_end, const EvaluationOptions& opt = {}) {
    detail::require_holdout(series, train_end, opt.horizon);
    const auto model = hw_fit(series.head(train_end), SmoothingSpec::holt_winters(series.frequency()));
    const auto fc = hw_forecast(model, opt.horizon);
    std::vector<EvaluationRow> rows;
    for (const auto& pt : fc.points) rows.push_back(make_row(pt.stamp, series[series.index_of(pt.stamp)], pt.value));
    return detail::finish(Method::I, std::move(rows), {detail::describe(model)});
}

inline MethodReport method_II(const TimeSeries& series, MonthStamp train_end, const EvaluationOptions& opt = {}) {
    detail::require_holdout(series, train_end, opt.horizon);
    std::vector<EvaluationRow> rows;
    std::vector<std::string> models;
    for (int k = 0; k < opt.horizon; ++k) {
        const MonthStamp origin = train_end.add_months(k);
        const auto model = hw_fit(series.head(origin), SmoothingSpec::holt_winters(series.frequency()));
        const auto pt = hw_forecast(model, 1).points.front();
        rows.push_back(make_row(pt.stamp, series[series.index_of(pt.stamp)], pt.value));
        models.push_back(detail::describe(model));
    }
    return detail::finish(Method::II, std::move(rows), std::move(models));
}

inline MethodReport method_III(const TimeSeries& series, MonthStamp train_end, const EvaluationOptions& opt = {}) {
    if (opt.horizon < 1) throw RangeError("horizon must be >= 1, got " + std::to_string(opt.horizon));
    const auto tw = detail::training_trend(series.head(train_end));
    SmoothingSpec spec = SmoothingSpec::holt();
    spec.frequency = series.frequency();
    const auto model = hw_fit(tw.trend, spec);
    return detail::trend_plus_season(Method::III, series, opt, hw_forecast(model, opt.horizon).values(),
                                     tw, {detail::describe(model)});
}

inline MethodReport method_IV(const TimeSeries& series, MonthStamp train_end, const EvaluationOptions& opt = {}) {
    if (opt.horizon < 1) throw RangeError("horizon must be >= 1, got " + std::to_string(opt.horizon));
    const auto tw = detail::training_trend(series.head(train_end));
    const auto line = ols_fit(tw.trend.values());
    char buf[96];
    std::snprintf(buf, sizeof buf, "ols intercept=%.6f slope=%.6f", line.intercept, line.slope);
    return detail::trend_plus_season(Method::IV, series, opt,
                                     ols_extrapolate(line, static_cast<long>(tw.trend.size()), opt.horizon), tw,
                                     {buf});
}

inline MethodReport method_V(const TimeSeries& series, MonthStamp train_end, const EvaluationOptions& opt = {}) {
    detail::require_holdout(series, train_end, opt.horizon);
    const auto model = detail::fit_arima(series.head(train_end), opt);
    const auto fc = arima_forecast(model, opt.horizon);
    std::vector<EvaluationRow> rows;
    for (const auto& pt : fc.points) rows.push_back(make_row(pt.stamp, series[series.index_of(pt.stamp)], pt.value));
    return detail::finish(Method::V, std::move(rows), {detail::describe(model)});
}

inline MethodReport method_VI(const TimeSeries& series, MonthStamp train_end, const EvaluationOptions& opt = {}) {
    detail::require_holdout(series, train_end, opt.horizon);
    std::vector<EvaluationRow> rows;
    std::vector<std::string> models;
    for (int k = 0; k < opt.horizon; ++k) {
        const MonthStamp origin = train_end.add_months(k);
        const auto model = detail::fit_arima(series.head(origin), opt);
        const auto pt = arima_forecast(model, 1).points.front();
        rows.push_back(make_row(pt.stamp, series[series.index_of(pt.stamp)], pt.value));
        models.push_back(detail::describe(model));
    }
    return detail::finish(Method::VI, std::move(rows), std::move(models));
}

inline MethodReport run_method(Method m, const TimeSeries& series, MonthStamp train_end,
                               const EvaluationOptions& opt = {}) {
    switch (m) {
        case Method::I: return method_I(series, train_end, opt);
        case Method::II: return method_II(series, train_end, opt);
        case Method::III: return method_III(series, train_end, opt);
        case Method::IV: return method_IV(series, train_end, opt);
        case Method::V: return method_V(series, train_end, opt);
        case Method::VI: return method_VI(series, train_end, opt);
    }
    throw RangeError("unknown method");
}

struct ComparisonRow {
    Method method;
    Metrics metrics;
};

struct Comparison {
    std::vector<ComparisonRow> rows;  // in input order
    Method best;                      // lowest rmse; ties go to the earlier method
};

inline Comparison compare(std::span<const MethodReport> reports) {
    Comparison c{{}, Method::I};
    const ComparisonRow* best = nullptr;
    for (const auto& r : reports) {
        if (!r.summary) continue;
        c.rows.push_back({r.method, *r.summary});
    }
    if (c.rows.empty()) throw EmptyInputError("comparison needs at least one non-empty report");
    for (const auto& row : c.rows) {
        if (!best || row.metrics.rmse < best->metrics.rmse ||
            (row.metrics.rmse == best->metrics.rmse && row.method < best->method)) {
            best = &row;
        }
    }
    c.best = best->method;
    return c;
}

}  // namespace tsf
