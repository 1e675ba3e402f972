#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsf/arima.hpp"

// Static SVG charts: stacked line panels and correlogram bar charts.
namespace tsf::svg {

struct Line {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<std::optional<double>> ys;  // gaps break the polyline
};

struct Panel {
    std::string title;
    std::vector<Line> lines;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string header(double w, double h) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
           "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
}

struct Frame {
    double left, top, width, height;
    double lo, hi;

    [[nodiscard]] double y(double v) const {
        const double span = hi > lo ? hi - lo : 1.0;
        return top + height - (v - lo) / span * height;
    }
};

inline std::string axes(const Frame& f, const std::string& title) {
    std::string s = "<g class=\"panel\">\n";
    s += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) + "\" height=\"" +
         num(f.height) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    s += "<text x=\"" + num(f.left) + "\" y=\"" + num(f.top - 6) + "\" font-weight=\"bold\">" + escape(title) +
         "</text>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.top + 10) + "\" text-anchor=\"end\">" + num(f.hi) +
         "</text>\n";
    s += "<text x=\"" + num(f.left - 6) + "\" y=\"" + num(f.top + f.height) + "\" text-anchor=\"end\">" +
         num(f.lo) + "</text>\n";
    return s;
}

}  // namespace detail

/// Vertically stacked line panels sharing one x axis of `x_labels`.
inline std::string line_panels(const std::vector<Panel>& panels, const std::vector<std::string>& x_labels,
                               double width = 900, double panel_height = 160) {
    const double left = 70;
    const double right = 20;
    const double gap = 40;
    const double height = gap + panels.size() * (panel_height + gap);
    std::string s = detail::header(width, height);
    const std::size_t n = x_labels.size();
    const double plot_w = width - left - right;
    auto x_at = [&](std::size_t i) { return left + (n > 1 ? plot_w * i / static_cast<double>(n - 1) : plot_w / 2); };

    for (std::size_t p = 0; p < panels.size(); ++p) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& line : panels[p].lines) {
            for (const auto& v : line.ys) {
                if (!v) continue;
                lo = std::min(lo, *v);
                hi = std::max(hi, *v);
            }
        }
        if (!std::isfinite(lo)) lo = hi = 0.0;
        if (lo == hi) {
            lo -= 1.0;
            hi += 1.0;
        }
        const detail::Frame f{left, gap + p * (panel_height + gap), plot_w, panel_height, lo, hi};
        s += detail::axes(f, panels[p].title);
        for (const auto& line : panels[p].lines) {
            std::string pts;
            auto flush = [&] {
                if (!pts.empty()) {
                    s += "<polyline fill=\"none\" stroke=\"" + line.color + "\" stroke-width=\"1.5\" points=\"" + pts +
                         "\"/>\n";
                }
                pts.clear();
            };
            for (std::size_t i = 0; i < line.ys.size() && i < n; ++i) {
                if (!line.ys[i]) {
                    flush();
                    continue;
                }
                if (!pts.empty()) pts += ' ';
                pts += detail::num(x_at(i)) + "," + detail::num(f.y(*line.ys[i]));
            }
            flush();
        }
        // legend
        double lx = left + 10;
        for (const auto& line : panels[p].lines) {
            if (line.label.empty()) continue;
            s += "<text x=\"" + detail::num(lx) + "\" y=\"" + detail::num(f.top + 14) + "\" fill=\"" + line.color +
                 "\">" + detail::escape(line.label) + "</text>\n";
            lx += 12 + 7.0 * line.label.size();
        }
        // sparse x labels
        const std::size_t step = std::max<std::size_t>(1, n / 12);
        for (std::size_t i = 0; i < n; i += step) {
            s += "<text x=\"" + detail::num(x_at(i)) + "\" y=\"" + detail::num(f.top + f.height + 14) +
                 "\" text-anchor=\"middle\">" + detail::escape(x_labels[i]) + "</text>\n";
        }
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

struct BarChart {
    std::string title;
    std::vector<CorrelogramPoint> points;
    double bound = 0.0;  // dashed +-bound lines
};

/// Stacked correlogram bar charts with significance band lines.
inline std::string correlogram_bars(const std::vector<BarChart>& charts, double width = 900,
                                    double chart_height = 200) {
    const double left = 70;
    const double right = 20;
    const double gap = 40;
    const double height = gap + charts.size() * (chart_height + gap);
    std::string s = detail::header(width, height);
    const double plot_w = width - left - right;
    for (std::size_t c = 0; c < charts.size(); ++c) {
        const auto& ch = charts[c];
        const detail::Frame f{left, gap + c * (chart_height + gap), plot_w, chart_height, -1.0, 1.0};
        s += detail::axes(f, ch.title);
        const double zero = f.y(0.0);
        s += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(zero) + "\" x2=\"" +
             detail::num(left + plot_w) + "\" y2=\"" + detail::num(zero) + "\" stroke=\"#444\"/>\n";
        for (double b : {ch.bound, -ch.bound}) {
            s += "<line class=\"band\" x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(f.y(b)) + "\" x2=\"" +
                 detail::num(left + plot_w) + "\" y2=\"" + detail::num(f.y(b)) +
                 "\" stroke=\"#1f77b4\" stroke-dasharray=\"4 3\"/>\n";
        }
        int max_lag = 1;
        for (const auto& p : ch.points) max_lag = std::max(max_lag, p.lag);
        const double slot = plot_w / (max_lag + 1);
        for (const auto& p : ch.points) {
            const double x = left + slot * (p.lag + 0.5);
            s += "<line x1=\"" + detail::num(x) + "\" y1=\"" + detail::num(zero) + "\" x2=\"" + detail::num(x) +
                 "\" y2=\"" + detail::num(f.y(p.value)) + "\" stroke=\"" + (p.significant ? "#d62728" : "#333") +
                 "\" stroke-width=\"3\"/>\n";
            if (p.lag % 6 == 0) {
                s += "<text x=\"" + detail::num(x) + "\" y=\"" + detail::num(f.top + f.height + 14) +
                     "\" text-anchor=\"middle\">" + std::to_string(p.lag) + "</text>\n";
            }
        }
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace tsf::svg
