#include <gtest/gtest.h>

#include <cmath>

#include "tsf/optimize.hpp"

using namespace tsf;

TEST(NelderMead, Rosenbrock) {
    auto f = [](const std::vector<double>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    NelderMeadOptions opt;
    opt.max_iter = 5000;
    opt.restarts = 3;
    const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
    EXPECT_NEAR(r.x[0], 1.0, 1e-3);
    EXPECT_NEAR(r.x[1], 1.0, 1e-3);
}

TEST(NelderMead, RespectsBox) {
    // Unconstrained optimum at (2, -3); box pins it to the corner.
    auto f = [](const std::vector<double>& x) { return std::pow(x[0] - 2.0, 2) + std::pow(x[1] + 3.0, 2); };
    NelderMeadOptions opt;
    opt.bounds = Box{{0.0, 0.0}, {1.0, 1.0}};
    const auto r = nelder_mead(f, {0.5, 0.5}, opt);
    EXPECT_NEAR(r.x[0], 1.0, 1e-6);
    EXPECT_NEAR(r.x[1], 0.0, 1e-6);
}

TEST(NelderMead, Deterministic) {
    auto f = [](const std::vector<double>& x) { return std::cos(3 * x[0]) + x[0] * x[0] + std::abs(x[1] - 0.3); };
    const auto a = nelder_mead(f, {0.7, 0.0});
    const auto b = nelder_mead(f, {0.7, 0.0});
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.value, b.value);
}
