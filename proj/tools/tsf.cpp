// tsf: command-line front end for the decomposition and forecasting library.
//
//   tsf decompose   [--input PATH|fixture] [--format csv|json] [--plot out.svg]
//   tsf correlogram [--max-lag 24] [--diff 1] [--train-end YYYY-MM]
//   tsf forecast    --method hw|holt|ols|arima|auto-arima [--order p,d,q] --horizon N
//   tsf evaluate    [--methods I,II,...] --train-end YYYY-MM
//
// Data goes to stdout (or --output); diagnostics go to stderr.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsf/arima.hpp"
#include "tsf/decomposition.hpp"
#include "tsf/evaluation.hpp"
#include "tsf/fixture.hpp"
#include "tsf/io.hpp"
#include "tsf/regression.hpp"
#include "tsf/series.hpp"
#include "tsf/smoothing.hpp"
#include "tsf/svg.hpp"

namespace {

struct Common {
    std::string input = "fixture";
    std::string start;
    std::string format = "csv";
    std::string output;
    std::string plot;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--input", c.input, "series file (CSV 'date,value' or plain numbers) or 'fixture'");
    cmd->add_option("--start", c.start, "first month YYYY-MM for plain-number input");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", c.output, "write data here instead of stdout");
    cmd->add_option("--plot", c.plot, "also write an SVG chart to this path");
}

tsf::TimeSeries load(const Common& c) {
    if (c.input == "fixture") {
        if (!c.start.empty()) throw tsf::RangeError("--start cannot be combined with the built-in fixture");
        return tsf::healthcare_fixture();
    }
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw tsf::Error("cannot open input '" + c.input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::istringstream src(text);
    const bool looks_csv = text.find("date,value") != std::string::npos && text.find("date,value") <= 3;
    if (looks_csv) {
        if (!c.start.empty()) throw tsf::RangeError("--start is only meaningful for plain-number input");
        return tsf::io::read_csv(src);
    }
    if (c.start.empty()) throw tsf::RangeError("plain-number input needs --start YYYY-MM");
    return tsf::io::read_plain(src, tsf::MonthStamp::parse(c.start));
}

// Writes `text` to --output or stdout.
void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw tsf::Error("cannot write output '" + c.output + "'");
    out << text;
}

void emit_plot(const std::string& path, const std::string& svg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tsf::Error("cannot write plot '" + path + "'");
    out << svg;
}

std::vector<std::string> labels(const tsf::TimeSeries& s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.stamp_at(i).str());
    return out;
}

std::vector<std::optional<double>> dense(std::span<const double> v) {
    return {v.begin(), v.end()};
}

tsf::ArimaOrder parse_order(const std::string& text) {
    int p = 0, d = 0, q = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d,%d%c", &p, &d, &q, &tail) != 3 || p < 0 || d < 0 || q < 0) {
        throw tsf::ParseError("--order expects p,d,q with non-negative integers, got '" + text + "'", 0);
    }
    return {p, d, q};
}

tsf::TimeSeries through(const tsf::TimeSeries& s, const std::string& train_end) {
    if (train_end.empty()) return s;
    return s.head(tsf::MonthStamp::parse(train_end));
}

int cmd_decompose(const Common& c) {
    const auto series = load(c);
    const auto dec = tsf::decompose(series);
    std::ostringstream out;
    if (c.format == "json") {
        out << tsf::io::to_json(dec).dump(2) << '\n';
    } else {
        tsf::io::write_decomposition_csv(out, dec);
    }
    emit(c, out.str());
    if (!c.plot.empty()) {
        std::vector<tsf::svg::Panel> panels = {
            {"observed", {{"", "#1f77b4", dense(series.values())}}},
            {"trend", {{"", "#2ca02c", dec.trend}}},
            {"seasonal", {{"", "#ff7f0e", dense(dec.seasonal)}}},
            {"random", {{"", "#7f7f7f", dec.random}}},
        };
        emit_plot(c.plot, tsf::svg::line_panels(panels, labels(series)));
    }
    return 0;
}

int cmd_correlogram(const Common& c, int max_lag, int diff, const std::string& train_end) {
    const auto series = through(load(c), train_end);
    const auto w = tsf::difference(series.values(), diff);
    const auto a = tsf::acf(w, max_lag);
    const auto p = tsf::pacf(w, max_lag);
    const double bound = tsf::detail::significance_bound(w.size());
    std::ostringstream out;
    if (c.format == "json") {
        out << tsf::io::correlogram_json(a, p, bound).dump(2) << '\n';
    } else {
        tsf::io::write_correlogram_csv(out, a, p, bound);
    }
    emit(c, out.str());
    if (!c.plot.empty()) {
        emit_plot(c.plot, tsf::svg::correlogram_bars({{"ACF", a, bound}, {"PACF", p, bound}}));
    }
    return 0;
}

int cmd_forecast(const Common& c, const std::string& method, const std::string& order_text, int horizon,
                 const std::string& train_end) {
    if (horizon < 1) throw tsf::RangeError("--horizon must be >= 1, got " + std::to_string(horizon));
    const auto full = load(c);
    const auto train = through(full, train_end);
    tsf::ForecastResult fc;
    if (method == "hw") {
        fc = tsf::hw_forecast(tsf::hw_fit(train, tsf::SmoothingSpec::holt_winters(train.frequency())), horizon);
    } else if (method == "holt") {
        fc = tsf::hw_forecast(tsf::hw_fit(train, tsf::SmoothingSpec::holt()), horizon);
    } else if (method == "ols") {
        const auto line = tsf::ols_fit(train.values());
        fc = tsf::ForecastResult::from_values(train.end(), tsf::ols_extrapolate(line, train.size(), horizon));
    } else if (method == "arima") {
        if (order_text.empty()) throw tsf::RangeError("--method arima needs --order p,d,q");
        fc = tsf::arima_forecast(tsf::css_fit(train, parse_order(order_text)), horizon);
    } else {  // auto-arima
        if (!order_text.empty()) throw tsf::RangeError("--order is not used with --method auto-arima");
        fc = tsf::arima_forecast(tsf::css_fit(train, tsf::auto_order(train.values())), horizon);
    }
    std::ostringstream out;
    if (c.format == "json") {
        out << tsf::io::to_json(fc).dump(2) << '\n';
    } else {
        tsf::io::write_forecast_csv(out, fc);
    }
    emit(c, out.str());
    if (!c.plot.empty()) {
        std::vector<std::string> xs = labels(train);
        std::vector<std::optional<double>> observed = dense(train.values());
        std::vector<std::optional<double>> predicted(train.size(), std::nullopt);
        predicted.back() = train.values().back();  // join the forecast to the last observation
        for (const auto& pt : fc.points) {
            xs.push_back(pt.stamp.str());
            observed.push_back(full.contains(pt.stamp) ? std::optional(full[full.index_of(pt.stamp)])
                                                        : std::nullopt);
            predicted.push_back(pt.value);
        }
        emit_plot(c.plot, tsf::svg::line_panels(
                              {{method + " forecast", {{"actual", "#1f77b4", observed}, {"forecast", "#d62728", predicted}}}},
                              xs));
    }
    return 0;
}

int cmd_evaluate(const Common& c, const std::vector<std::string>& method_names, const std::string& train_end,
                 const std::string& past_seasonal) {
    if (train_end.empty()) throw tsf::RangeError("evaluate needs --train-end YYYY-MM");
    const auto series = load(c);
    const auto end = tsf::MonthStamp::parse(train_end);
    std::vector<tsf::Method> methods;
    if (method_names.empty()) {
        methods.assign(std::begin(tsf::kAllMethods), std::end(tsf::kAllMethods));
    } else {
        for (const auto& m : method_names) methods.push_back(tsf::parse_method(m));
    }
    tsf::EvaluationOptions opt;
    opt.past_seasonal =
        past_seasonal == "signed" ? tsf::SeasonalOffsets::signed_figures : tsf::SeasonalOffsets::magnitude;

    // Methods are independent; results are gathered in enumeration order.
    std::vector<std::future<tsf::MethodReport>> jobs;
    for (auto m : methods) {
        jobs.push_back(std::async(std::launch::async, [&series, end, opt, m] {
            return tsf::run_method(m, series, end, opt);
        }));
    }
    std::vector<tsf::MethodReport> reports;
    for (auto& j : jobs) reports.push_back(j.get());
    const auto cmp = tsf::compare(reports);

    std::ostringstream out;
    if (c.format == "json") {
        tsf::io::write_evaluation_json(out, reports, cmp);
    } else {
        tsf::io::write_evaluation_csv(out, reports, cmp);
    }
    emit(c, out.str());

    if (!c.plot.empty()) {
        std::vector<tsf::svg::Panel> panels;
        std::vector<std::string> xs;
        for (const auto& row : reports.front().rows) xs.push_back(row.stamp.str());
        for (const auto& r : reports) {
            std::vector<std::optional<double>> actual, predicted;
            for (const auto& row : r.rows) {
                actual.push_back(row.actual);
                predicted.push_back(row.forecast);
            }
            panels.push_back({std::string("Method ") + tsf::to_string(r.method) + ": actual vs predicted",
                              {{"actual", "#1f77b4", actual}, {"predicted", "#d62728", predicted}}});
        }
        emit_plot(c.plot, tsf::svg::line_panels(panels, xs));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-series decomposition and forecasting"};
    app.require_subcommand(1, 1);

    Common dc, cc, fc, ec;
    auto* decompose = app.add_subcommand("decompose", "additive decomposition table");
    add_common(decompose, dc);

    int max_lag = 24;
    int diff = 0;
    std::string corr_train_end;
    auto* correlogram = app.add_subcommand("correlogram", "ACF and PACF with significance flags");
    add_common(correlogram, cc);
    correlogram->add_option("--max-lag", max_lag, "largest lag")->check(CLI::PositiveNumber);
    correlogram->add_option("--diff", diff, "difference the series this many times first")->check(CLI::Range(0, 2));
    correlogram->add_option("--train-end", corr_train_end, "use data through this month only");

    std::string method = "hw";
    std::string order;
    int horizon = 12;
    std::string fc_train_end;
    auto* forecast = app.add_subcommand("forecast", "fit one model and forecast");
    add_common(forecast, fc);
    forecast->add_option("--method", method)->check(CLI::IsMember({"hw", "holt", "ols", "arima", "auto-arima"}));
    forecast->add_option("--order", order, "p,d,q for --method arima");
    forecast->add_option("--horizon", horizon, "steps ahead")->check(CLI::PositiveNumber);
    forecast->add_option("--train-end", fc_train_end, "fit on data through this month");

    std::vector<std::string> methods;
    std::string ev_train_end;
    std::string past_seasonal = "magnitude";
    auto* evaluate = app.add_subcommand("evaluate", "run the six-method comparison");
    add_common(evaluate, ec);
    evaluate->add_option("--methods", methods, "comma-separated subset of I..VI")->delimiter(',');
    evaluate->add_option("--train-end", ev_train_end, "last training month");
    evaluate->add_option("--past-seasonal", past_seasonal, "offset added by Methods III and IV")
        ->check(CLI::IsMember({"magnitude", "signed"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (decompose->parsed()) return cmd_decompose(dc);
        if (correlogram->parsed()) return cmd_correlogram(cc, max_lag, diff, corr_train_end);
        if (forecast->parsed()) return cmd_forecast(fc, method, order, horizon, fc_train_end);
        return cmd_evaluate(ec, methods, ev_train_end, past_seasonal);
    } catch (const std::exception& e) {
        std::cerr << "tsf: " << e.what() << '\n';
        return 1;
    }
}
