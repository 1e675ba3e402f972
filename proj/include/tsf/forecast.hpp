#pragma once

#include <vector>

#include "tsf/series.hpp"

namespace tsf {

struct ForecastPoint {
    MonthStamp stamp;
    double value = 0.0;
};

/// Point forecasts for origin+1 .. origin+horizon.
struct ForecastResult {
    MonthStamp origin;  // last training month
    int horizon = 0;
    std::vector<ForecastPoint> points;

    static ForecastResult from_values(MonthStamp origin, const std::vector<double>& values) {
        ForecastResult r{origin, static_cast<int>(values.size()), {}};
        r.points.reserve(values.size());
        for (std::size_t h = 0; h < values.size(); ++h) {
            r.points.push_back({origin.add_months(static_cast<long>(h) + 1), values[h]});
        }
        return r;
    }

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(points.size());
        for (const auto& p : points) v.push_back(p.value);
        return v;
    }
};

}  // namespace tsf
