#include <gtest/gtest.h>

#include "tsf/error.hpp"
#include "tsf/fixture.hpp"
#include "tsf/series.hpp"

using namespace tsf;

TEST(MonthStamp, ArithmeticAndText) {
    const MonthStamp jan{2010, 1};
    EXPECT_EQ(jan.add_months(11), (MonthStamp{2010, 12}));
    EXPECT_EQ(jan.add_months(12), (MonthStamp{2011, 1}));
    EXPECT_EQ(jan.add_months(-1), (MonthStamp{2009, 12}));
    EXPECT_EQ((MonthStamp{2016, 12}).months_since(jan), 83);
    EXPECT_EQ(jan.str(), "2010-01");
    EXPECT_EQ(MonthStamp::parse("2015-12"), (MonthStamp{2015, 12}));
    EXPECT_LT(jan, (MonthStamp{2010, 2}));
}

TEST(MonthStamp, RejectsMalformed) {
    EXPECT_THROW(MonthStamp(2010, 13), RangeError);
    EXPECT_THROW(MonthStamp::parse("2010-1"), ParseError);
    EXPECT_THROW(MonthStamp::parse("2010-00"), Error);
    EXPECT_THROW(MonthStamp::parse("abcd-ef"), ParseError);
}

TEST(TimeSeries, RejectsEmpty) {
    EXPECT_THROW(TimeSeries({2010, 1}, {}), EmptyInputError);
}

TEST(TimeSeries, TrainingSliceHas72Points) {
    const auto h = healthcare_fixture();
    const auto train = h.slice({2010, 1}, {2015, 12});
    EXPECT_EQ(train.size(), 72u);
    EXPECT_EQ(train.end(), (MonthStamp{2015, 12}));
}

TEST(TimeSeries, FullSliceIsIdentity) {
    const auto h = healthcare_fixture();
    EXPECT_EQ(h.slice(h.start(), h.end()), h);
}

TEST(TimeSeries, HoldoutSliceStartsAtJanuaryActual) {
    const auto h = healthcare_fixture();
    const auto test = h.slice({2016, 1}, {2016, 12});
    ASSERT_EQ(test.size(), 12u);
    EXPECT_DOUBLE_EQ(test[0], 16305.0);
    EXPECT_DOUBLE_EQ(test[11], 14728.0);
}

TEST(TimeSeries, OutOfRangeNamesTheStamp) {
    const auto h = healthcare_fixture();
    try {
        (void)h.slice({2009, 12}, {2010, 6});
        FAIL() << "expected RangeError";
    } catch (const RangeError& e) {
        EXPECT_NE(std::string(e.what()).find("2009-12"), std::string::npos);
    }
    EXPECT_THROW((void)h.index_of({2017, 1}), RangeError);
}

TEST(Summary, Constant) {
    const std::vector<double> xs{3, 3, 3};
    const auto s = summary(xs);
    EXPECT_EQ(s.min, 3);
    EXPECT_EQ(s.max, 3);
    EXPECT_EQ(s.mean, 3);
    EXPECT_EQ(s.mean_abs, 3);
    ASSERT_TRUE(s.sd.has_value());
    EXPECT_EQ(*s.sd, 0);
}

TEST(Summary, TwoPointSampleSd) {
    const std::vector<double> xs{1, -1};
    const auto s = summary(xs);
    EXPECT_DOUBLE_EQ(s.mean, 0.0);
    EXPECT_DOUBLE_EQ(s.mean_abs, 1.0);
    EXPECT_NEAR(*s.sd, std::sqrt(2.0), 1e-12);
}

TEST(Summary, SingleValueHasNoSd) {
    const std::vector<double> xs{5};
    EXPECT_FALSE(summary(xs).sd.has_value());
    EXPECT_THROW(summary(std::vector<double>{}), EmptyInputError);
}
