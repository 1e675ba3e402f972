#pragma once

#include <random>
#include <vector>

#include "tsf/series.hpp"

namespace tsf::fixtures {

/// Random monthly series: drifting level + fixed seasonal shape + noise.
inline TimeSeries random_series(std::uint64_t seed, std::size_t n = 60, MonthStamp start = {2001, 1}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> uni(-50.0, 50.0);
    std::vector<double> season(12);
    for (auto& s : season) s = uni(rng);
    const double drift = uni(rng) / 10.0;
    std::vector<double> v(n);
    double level = 1000.0 + uni(rng);
    for (std::size_t i = 0; i < n; ++i) {
        level += drift + 5.0 * noise(rng);
        v[i] = level + season[(static_cast<std::size_t>(start.month) - 1 + i) % 12] + 10.0 * noise(rng);
    }
    return {start, std::move(v)};
}

/// a + b*t + s[month], with s shifted to sum to zero.
inline TimeSeries exact_signal(double a, double b, std::vector<double> s, std::size_t n,
                               MonthStamp start = {2001, 1}) {
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    for (auto& v : s) v -= mean;
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        v[t] = a + b * static_cast<double>(t) + s[(static_cast<std::size_t>(start.month) - 1 + t) % 12];
    }
    return {start, std::move(v)};
}

inline std::vector<double> seasonal_shape() {
    return {12.0, -30.0, 5.0, 41.0, -8.0, -22.0, 17.0, 3.0, -14.0, 26.0, -19.0, -11.0};
}

}  // namespace tsf::fixtures
