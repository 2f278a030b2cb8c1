// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "ltdr/error.hpp"
#include "ltdr/timeseries.hpp"

namespace {

using ltdr::Frequency;
using ltdr::Period;
using ltdr::TimeSeries;

TEST(TimeSeries, EmptyRejected) {
    try {
        TimeSeries({2000, 12}, Frequency::Annual, {});
        FAIL();
    } catch (const ltdr::Error& e) {
        EXPECT_EQ(e.kind(), ltdr::ErrorKind::EmptyInput);
    }
}

TEST(TimeSeries, AnnualUsesYearEnd) {
    TimeSeries s({1990, 3}, Frequency::Annual, {1, 2, 3});
    EXPECT_EQ(s.start(), (Period{1990, 12}));
    EXPECT_EQ(s.end(), (Period{1992, 12}));
    EXPECT_EQ(s.index_of({1991, 12}), 1);
    EXPECT_EQ(s.index_of({1989, 12}), -1);
    EXPECT_EQ(s.index_of({1993, 12}), -1);
}

TEST(TimeSeries, MonthlyArithmetic) {
    EXPECT_EQ(ltdr::advance({1999, 11}, Frequency::Monthly, 3), (Period{2000, 2}));
    EXPECT_EQ(ltdr::advance({2000, 2}, Frequency::Monthly, -3), (Period{1999, 11}));
    EXPECT_EQ(ltdr::advance({2000, 12}, Frequency::Annual, -5), (Period{1995, 12}));
    EXPECT_EQ((Period{2001, 7}).to_string(Frequency::Monthly), "2001-07");
    EXPECT_EQ((Period{2001, 12}).to_string(Frequency::Annual), "2001");
}

TEST(TimeSeries, MonthlyCountsOverNinetyThreeYears) {
    // December to December across 93 years, and January to December.
    TimeSeries a({1920, 12}, Frequency::Monthly, std::vector<double>(93 * 12 + 1, 0.0));
    EXPECT_EQ(a.end(), (Period{2013, 12}));
    EXPECT_EQ(a.size(), 1117u);
    EXPECT_EQ(a.distinct_years(), 94u);
    TimeSeries b({1921, 1}, Frequency::Monthly, std::vector<double>(93 * 12, 0.0));
    EXPECT_EQ(b.end(), (Period{2013, 12}));
    EXPECT_EQ(b.size(), 1116u);
    EXPECT_EQ(b.distinct_years(), 93u);
    EXPECT_EQ(ltdr::to_annual(b).size(), 93u);
}

TEST(TimeSeries, ToAnnualTakesLatestMonth) {
    std::vector<double> v;
    for (int i = 0; i < 27; ++i) v.push_back(i);  // 2000-01 .. 2002-03
    TimeSeries s({2000, 1}, Frequency::Monthly, v);
    const TimeSeries a = ltdr::to_annual(s);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[0], 11.0);
    EXPECT_EQ(a[1], 23.0);
    EXPECT_EQ(a[2], 26.0);  // partial final year: last available month
    EXPECT_EQ(a.start(), (Period{2000, 12}));
}

TEST(TimeSeries, Slice) {
    TimeSeries s({1990, 12}, Frequency::Annual, {1, 2, 3, 4});
    const TimeSeries t = s.slice(1, 2);
    EXPECT_EQ(t.start(), (Period{1991, 12}));
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t[1], 3.0);
    EXPECT_THROW(s.slice(3, 2), ltdr::Error);
}

TEST(TimeSeries, AlignAnnual) {
    TimeSeries a({1990, 12}, Frequency::Annual, {1, 2, 3, 4});
    TimeSeries b({1992, 12}, Frequency::Annual, {30, 40, 50});
    const auto p = ltdr::align_annual(a, b);
    EXPECT_EQ(p.years, (std::vector<int>{1992, 1993}));
    EXPECT_EQ(p.a, (std::vector<double>{3, 4}));
    EXPECT_EQ(p.b, (std::vector<double>{30, 40}));
    TimeSeries c({2000, 12}, Frequency::Annual, {1});
    try {
        ltdr::align_annual(a, c);
        FAIL();
    } catch (const ltdr::Error& e) {
        EXPECT_EQ(e.kind(), ltdr::ErrorKind::Alignment);
    }
}

}  // namespace
