#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsf/error.hpp"

namespace tsf {

/// Calendar month on a proleptic year/month axis.
struct MonthStamp {
    int year = 2000;
    int month = 1;  // 1..12

    constexpr MonthStamp() = default;
    constexpr MonthStamp(int y, int m) : year(y), month(m) {
        if (m < 1 || m > 12) {
            throw RangeError("month out of range: " + std::to_string(m));
        }
    }

    /// Months elapsed since year 0, January. Monotone in (year, month).
    [[nodiscard]] constexpr long serial() const noexcept {
        return static_cast<long>(year) * 12 + (month - 1);
    }

    [[nodiscard]] static constexpr MonthStamp from_serial(long s) noexcept {
        long y = s >= 0 ? s / 12 : -((-s + 11) / 12);
        MonthStamp out;
        out.year = static_cast<int>(y);
        out.month = static_cast<int>(s - y * 12) + 1;
        return out;
    }

    [[nodiscard]] constexpr MonthStamp add_months(long k) const noexcept {
        return from_serial(serial() + k);
    }

    /// Signed number of months from `other` to *this.
    [[nodiscard]] constexpr long months_since(const MonthStamp& other) const noexcept {
        return serial() - other.serial();
    }

    constexpr auto operator<=>(const MonthStamp& o) const noexcept {
        return serial() <=> o.serial();
    }
    constexpr bool operator==(const MonthStamp& o) const noexcept = default;

    /// "YYYY-MM"
    [[nodiscard]] std::string str() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
        return buf;
    }

    /// Parses "YYYY-MM". Throws ParseError on anything else.
    static MonthStamp parse(std::string_view text, std::size_t position = 0) {
        auto bad = [&] {
            return ParseError("malformed month stamp '" + std::string(text) + "' (expected YYYY-MM)",
                              position);
        };
        if (text.size() != 7 || text[4] != '-') throw bad();
        int y = 0;
        int m = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (text[i] < '0' || text[i] > '9') throw bad();
            y = y * 10 + (text[i] - '0');
        }
        for (std::size_t i = 5; i < 7; ++i) {
            if (text[i] < '0' || text[i] > '9') throw bad();
            m = m * 10 + (text[i] - '0');
        }
        if (m < 1 || m > 12) throw bad();
        return {y, m};
    }
};

/// Gap-free, regularly sampled series. Immutable after construction.
class TimeSeries {
public:
    TimeSeries(MonthStamp start, std::vector<double> values, int frequency = 12)
        : start_(start), frequency_(frequency), values_(std::move(values)) {
        if (values_.empty()) throw EmptyInputError("time series needs at least one value");
        if (frequency_ < 2) {
            throw RangeError("frequency must be >= 2, got " + std::to_string(frequency_));
        }
    }

    [[nodiscard]] MonthStamp start() const noexcept { return start_; }
    [[nodiscard]] MonthStamp end() const noexcept { return stamp_at(values_.size() - 1); }
    [[nodiscard]] int frequency() const noexcept { return frequency_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    [[nodiscard]] MonthStamp stamp_at(std::size_t i) const noexcept {
        return start_.add_months(static_cast<long>(i));
    }

    [[nodiscard]] bool contains(MonthStamp s) const noexcept {
        return s >= start_ && s <= end();
    }

    /// Position of `s`; throws RangeError naming the stamp if outside the span.
    [[nodiscard]] std::size_t index_of(MonthStamp s) const {
        if (!contains(s)) {
            throw RangeError("stamp " + s.str() + " outside series span " + start_.str() + ".." +
                             end().str());
        }
        return static_cast<std::size_t>(s.months_since(start_));
    }

    /// Inclusive sub-series from..to.
    [[nodiscard]] TimeSeries slice(MonthStamp from, MonthStamp to) const {
        if (from > to) {
            throw RangeError("slice bounds reversed: " + from.str() + " > " + to.str());
        }
        const auto a = index_of(from);
        const auto b = index_of(to);
        return {from, std::vector<double>(values_.begin() + static_cast<long>(a),
                                          values_.begin() + static_cast<long>(b) + 1),
                frequency_};
    }

    /// Everything up to and including `to`.
    [[nodiscard]] TimeSeries head(MonthStamp to) const { return slice(start_, to); }

    bool operator==(const TimeSeries&) const = default;

private:
    MonthStamp start_;
    int frequency_;
    std::vector<double> values_;
};

struct SummaryStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double mean_abs = 0.0;
    std::optional<double> sd;  // sample SD (n-1); absent for a single value
};

/// min/max/mean/mean-of-absolutes/sample SD of a non-empty sequence.
inline SummaryStats summary(std::span<const double> xs) {
    if (xs.empty()) throw EmptyInputError("summary of an empty sequence");
    SummaryStats s;
    auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    s.min = *lo;
    s.max = *hi;
    double sum = 0.0;
    double sum_abs = 0.0;
    for (double x : xs) {
        sum += x;
        sum_abs += std::abs(x);
    }
    const double n = static_cast<double>(xs.size());
    s.mean = sum / n;
    s.mean_abs = sum_abs / n;
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / (n - 1.0));
    }
    // Guard the invariant against rounding in the mean of a near-constant sequence.
    s.mean = std::clamp(s.mean, s.min, s.max);
    return s;
}

}  // namespace tsf
