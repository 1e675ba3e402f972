#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tsf/arima.hpp"
#include "tsf/decomposition.hpp"
#include "tsf/error.hpp"
#include "tsf/evaluation.hpp"
#include "tsf/forecast.hpp"
#include "tsf/series.hpp"

namespace tsf::io {

using nlohmann::json;

namespace detail {

inline std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string_view chomp(std::string_view line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
    return line;
}

}  // namespace detail

/// Fixed four-decimal rendering used by every text writer.
inline std::string fmt4(double v) {
    if (std::abs(v) < 0.00005) v = 0.0;  // no "-0.0000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline double round4(double v) {
    const double r = std::round(v * 1e4) / 1e4;
    return r == 0.0 ? 0.0 : r;
}

// ---------------------------------------------------------------------------
// Input

/// Whitespace-separated decimal numerals, stamped consecutively from `start`.
inline TimeSeries read_plain(std::istream& in, MonthStamp start, int frequency = 12) {
    std::vector<double> values;
    std::string token;
    std::size_t position = 0;
    while (in >> token) {
        ++position;
        auto v = detail::parse_real(token);
        if (!v) {
            throw ParseError("non-numeric token '" + token + "' at position " + std::to_string(position),
                             position);
        }
        values.push_back(*v);
    }
    if (values.empty()) throw EmptyInputError("plain input contains no values");
    return {start, std::move(values), frequency};
}

/// "date,value" CSV with YYYY-MM dates in ascending consecutive order.
inline TimeSeries read_csv(std::istream& in, int frequency = 12) {
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::optional<MonthStamp> start;
    std::optional<MonthStamp> prev;
    std::vector<double> values;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::chomp(raw);
        if (!header_seen) {
            if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
                static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
                line.remove_prefix(3);
            }
            if (line != "date,value") {
                throw ParseError("expected header 'date,value', got '" + std::string(line) + "'", line_no);
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'YYYY-MM,value'", line_no);
        }
        const auto stamp = MonthStamp::parse(line.substr(0, comma), line_no);
        const auto value = detail::parse_real(line.substr(comma + 1));
        if (!value) {
            throw ParseError("line " + std::to_string(line_no) + ": malformed value '" +
                                 std::string(line.substr(comma + 1)) + "'",
                             line_no);
        }
        if (prev && stamp != prev->add_months(1)) {
            const char* what = stamp == *prev ? "duplicate month " : (stamp < *prev ? "out-of-order month " : "gap before month ");
            throw ContinuityError(what + stamp.str() + " (previous row " + prev->str() + ")");
        }
        if (!start) start = stamp;
        prev = stamp;
        values.push_back(*value);
    }
    if (!header_seen) throw EmptyInputError("csv input is empty");
    if (values.empty()) throw EmptyInputError("csv input has a header but no rows");
    return {*start, std::move(values), frequency};
}

// ---------------------------------------------------------------------------
// Output: CSV

inline void write_series_csv(std::ostream& out, const TimeSeries& s) {
    out << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) out << s.stamp_at(i).str() << ',' << fmt4(s[i]) << '\n';
}

inline void write_plain(std::ostream& out, std::span<const double> values) {
    for (double v : values) out << fmt4(v) << '\n';
}

/// Rows, then (if any) a blank line and metric,value pairs.
inline void write_report_csv(std::ostream& out, const MethodReport& r) {
    out << "stamp,actual,forecast,pct_error\n";
    for (const auto& row : r.rows) {
        out << row.stamp.str() << ',' << fmt4(row.actual) << ',' << fmt4(row.forecast) << ','
            << fmt4(row.pct_error) << '\n';
    }
    if (r.summary) {
        const auto& m = *r.summary;
        out << "\nmetric,value\n"
            << "min," << fmt4(m.min) << '\n'
            << "max," << fmt4(m.max) << '\n'
            << "mean," << fmt4(m.mean) << '\n'
            << "sd," << fmt4(m.sd) << '\n'
            << "rmse," << fmt4(m.rmse) << '\n';
    }
}

/// Inverse of write_report_csv (numbers to rendered precision).
inline MethodReport read_report_csv(std::istream& in, Method method = Method::I) {
    MethodReport r;
    r.method = method;
    std::string raw;
    std::size_t line_no = 0;
    enum { header, rows, metric_header, metrics } state = header;
    Metrics m;
    int seen = 0;
    auto num = [&](std::string_view s) {
        auto v = detail::parse_real(s);
        if (!v) throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'", line_no);
        return *v;
    };
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::chomp(raw);
        switch (state) {
            case header:
                if (line != "stamp,actual,forecast,pct_error") throw ParseError("bad report header", line_no);
                state = rows;
                break;
            case rows: {
                if (line.empty()) {
                    state = metric_header;
                    break;
                }
                std::vector<std::string_view> f;
                std::size_t pos = 0;
                for (;;) {
                    const auto c = line.find(',', pos);
                    f.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
                    if (c == std::string_view::npos) break;
                    pos = c + 1;
                }
                if (f.size() != 4) throw ParseError("report row needs 4 fields", line_no);
                r.rows.push_back({MonthStamp::parse(f[0], line_no), num(f[1]), num(f[2]), num(f[3])});
                break;
            }
            case metric_header:
                if (line != "metric,value") throw ParseError("bad metric header", line_no);
                state = metrics;
                break;
            case metrics: {
                if (line.empty()) break;
                const auto c = line.find(',');
                if (c == std::string_view::npos) throw ParseError("bad metric line", line_no);
                const auto name = line.substr(0, c);
                const double v = num(line.substr(c + 1));
                if (name == "min") m.min = v;
                else if (name == "max") m.max = v;
                else if (name == "mean") m.mean = v;
                else if (name == "sd") m.sd = v;
                else if (name == "rmse") m.rmse = v;
                else throw ParseError("unknown metric '" + std::string(name) + "'", line_no);
                ++seen;
                break;
            }
        }
    }
    if (state == header) throw EmptyInputError("report csv is empty");
    if (seen > 0) r.summary = m;
    return r;
}

inline void write_comparison_csv(std::ostream& out, const Comparison& c) {
    out << "method,min,max,mean,sd,rmse\n";
    for (const auto& row : c.rows) {
        const auto& m = row.metrics;
        out << to_string(row.method) << ',' << fmt4(m.min) << ',' << fmt4(m.max) << ',' << fmt4(m.mean) << ','
            << fmt4(m.sd) << ',' << fmt4(m.rmse) << '\n';
    }
    out << "\nbest," << to_string(c.best) << '\n';
}

/// Blocks of "method,<id>" + report, then the comparison table.
inline void write_evaluation_csv(std::ostream& out, std::span<const MethodReport> reports, const Comparison& c) {
    for (const auto& r : reports) {
        out << "method," << to_string(r.method) << '\n';
        write_report_csv(out, r);
        out << '\n';
    }
    write_comparison_csv(out, c);
}

inline void write_decomposition_csv(std::ostream& out, const Decomposition& d) {
    auto opt = [](const std::optional<double>& v) { return v ? fmt4(*v) : std::string(); };
    out << "stamp,observed,trend,seasonal,random\n";
    for (std::size_t i = 0; i < d.source.size(); ++i) {
        out << d.source.stamp_at(i).str() << ',' << fmt4(d.source[i]) << ',' << opt(d.trend[i]) << ','
            << fmt4(d.seasonal[i]) << ',' << opt(d.random[i]) << '\n';
    }
}

inline void write_forecast_csv(std::ostream& out, const ForecastResult& f) {
    out << "stamp,forecast\n";
    for (const auto& p : f.points) out << p.stamp.str() << ',' << fmt4(p.value) << '\n';
}

inline void write_correlogram_csv(std::ostream& out, std::span<const CorrelogramPoint> acf_points,
                                  std::span<const CorrelogramPoint> pacf_points, double bound) {
    out << "function,lag,value,significant\n";
    for (const auto& p : acf_points) out << "acf," << p.lag << ',' << fmt4(p.value) << ',' << (p.significant ? 1 : 0) << '\n';
    for (const auto& p : pacf_points) out << "pacf," << p.lag << ',' << fmt4(p.value) << ',' << (p.significant ? 1 : 0) << '\n';
    out << "\nbound," << fmt4(bound) << '\n';
}

// ---------------------------------------------------------------------------
// Output: JSON

inline json to_json(const Metrics& m) {
    return {{"min", round4(m.min)}, {"max", round4(m.max)}, {"mean", round4(m.mean)},
            {"sd", round4(m.sd)},   {"rmse", round4(m.rmse)}};
}

inline json to_json(const MethodReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"stamp", row.stamp.str()},
                        {"actual", round4(row.actual)},
                        {"forecast", round4(row.forecast)},
                        {"pct_error", round4(row.pct_error)}});
    }
    json j{{"method", to_string(r.method)}, {"rows", rows}};
    j["summary"] = r.summary ? to_json(*r.summary) : json(nullptr);
    j["models"] = r.models;
    return j;
}

inline json to_json(const Comparison& c) {
    json rows = json::array();
    for (const auto& row : c.rows) {
        json j = to_json(row.metrics);
        j["method"] = to_string(row.method);
        rows.push_back(j);
    }
    return {{"rows", rows}, {"best", to_string(c.best)}};
}

inline json to_json(const Decomposition& d) {
    auto opt = [](const std::optional<double>& v) { return v ? json(round4(*v)) : json(nullptr); };
    json rows = json::array();
    for (std::size_t i = 0; i < d.source.size(); ++i) {
        rows.push_back({{"stamp", d.source.stamp_at(i).str()},
                        {"observed", round4(d.source[i])},
                        {"trend", opt(d.trend[i])},
                        {"seasonal", round4(d.seasonal[i])},
                        {"random", opt(d.random[i])}});
    }
    json figs = json::array();
    for (double f : d.seasonal_figures) figs.push_back(round4(f));
    return {{"rows", rows}, {"seasonal_figures", figs}};
}

inline json to_json(const ForecastResult& f) {
    json pts = json::array();
    for (const auto& p : f.points) pts.push_back({{"stamp", p.stamp.str()}, {"forecast", round4(p.value)}});
    return {{"origin", f.origin.str()}, {"horizon", f.horizon}, {"points", pts}};
}

inline json correlogram_json(std::span<const CorrelogramPoint> acf_points,
                             std::span<const CorrelogramPoint> pacf_points, double bound) {
    auto pts = [](std::span<const CorrelogramPoint> ps) {
        json a = json::array();
        for (const auto& p : ps) a.push_back({{"lag", p.lag}, {"value", round4(p.value)}, {"significant", p.significant}});
        return a;
    };
    return {{"acf", pts(acf_points)},
            {"pacf", pts(pacf_points)},
            {"bound", round4(bound)},
            {"acf_cutoff", significance_cutoff(acf_points)},
            {"pacf_cutoff", significance_cutoff(pacf_points)}};
}

inline void write_report_json(std::ostream& out, const MethodReport& r) { out << to_json(r).dump(2) << '\n'; }

inline void write_evaluation_json(std::ostream& out, std::span<const MethodReport> reports, const Comparison& c) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(to_json(r));
    out << json{{"reports", all}, {"comparison", to_json(c)}}.dump(2) << '\n';
}

}  // namespace tsf::io
