#pragma once

#include <vector>

#include "tsf/series.hpp"

namespace tsf {

/// Monthly healthcare sector index, January 2010 - December 2016 (84 points).
inline TimeSeries healthcare_fixture() {
    static const std::vector<double> values{
        // 2010
        4765, 4913, 5328, 5345, 5490, 5749, 5597, 5544, 5996, 6433, 6583, 6734,
        // 2011
        6237, 5718, 6024, 6233, 6393, 6398, 6421, 5962, 5868, 6136, 6055, 5871,
        // 2012
        6336, 6336, 6626, 6796, 6645, 6884, 7142, 7496, 7528, 7620, 7946, 8132,
        // 2013
        8017, 7810, 8008, 8691, 8847, 8845, 9074, 8966, 9464, 9609, 9501, 9966,
        // 2014
        10110, 10840, 10084, 10757, 10315, 11462, 12341, 13357, 14352, 14354, 14957, 14693,
        // 2015
        15667, 15855, 17285, 16187, 16900, 16564, 17048, 17962, 17779, 18066, 16298, 16905,
        // 2016
        16305, 15208, 15149, 15582, 15246, 15493, 16299, 16162, 16181, 16472, 15734, 14728,
    };
    return {MonthStamp(2010, 1), values, 12};
}

}  // namespace tsf
