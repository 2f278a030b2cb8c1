// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "ltdr/error.hpp"
#include "ltdr/ratecore.hpp"

namespace {

using ltdr::ErrorKind;
using ltdr::Frequency;
using ltdr::TimeSeries;

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const ltdr::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Config;
}

TEST(RateCore, YieldFromAnnualRate) {
    EXPECT_NEAR(ltdr::yield_from_annual_rate(0.05), 0.04879016416943200, 1e-16);
    EXPECT_NEAR(ltdr::yield_from_annual_rate(-0.02), -0.02020270731751945, 1e-16);
    EXPECT_EQ(ltdr::yield_from_annual_rate(0.0), 0.0);
    EXPECT_EQ(kind_of([] { ltdr::yield_from_annual_rate(-1.0); }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { ltdr::yield_from_annual_rate(-1.5); }), ErrorKind::Domain);
}

TEST(RateCore, InflationRate) {
    TimeSeries g({2000, 12}, Frequency::Annual, {0.02, 0.04, 0.03});
    EXPECT_NEAR(ltdr::inflation_rate(g, 0, 2), 0.02951167022473050, 1e-16);
    EXPECT_NEAR(ltdr::inflation_rate(g, 2, 1), 0.02955880224154440, 1e-16);
    EXPECT_EQ(kind_of([&] { ltdr::inflation_rate(g, 2, 2); }), ErrorKind::Bounds);
    EXPECT_EQ(kind_of([&] { ltdr::inflation_rate(g, 0, 0); }), ErrorKind::Domain);
}

TEST(RateCore, FisherRealRate) {
    EXPECT_NEAR(ltdr::fisher_real_rate(std::log(1.05), std::log(1.03)), 0.01923136192788760, 1e-16);
}

TEST(RateCore, NegativeFractionIsStrict) {
    const std::vector<double> v{-0.01, 0.0, 0.02, -0.03};
    EXPECT_DOUBLE_EQ(ltdr::negative_fraction(v), 0.5);
    EXPECT_EQ(ltdr::negative_fraction(std::vector<double>{0.0, 0.0}), 0.0);
    EXPECT_EQ(kind_of([] { ltdr::negative_fraction(std::vector<double>{}); }), ErrorKind::EmptyInput);
    ltdr::RealRateSeries s{TimeSeries({2000, 12}, Frequency::Annual, v), ltdr::Maturity::ThreeMonth};
    EXPECT_DOUBLE_EQ(ltdr::negative_fraction(s), 0.5);
}

TEST(RateCore, HistogramClampsIntoEdgeBins) {
    const ltdr::HistogramSpec spec;
    EXPECT_EQ(spec.bins(), 30u);
    const auto h = ltdr::make_histogram(std::vector<double>{-0.5, -0.15, -0.001, 0.0, 0.149, 0.2}, spec);
    ASSERT_EQ(h.edges.size(), 31u);
    EXPECT_NEAR(h.edges.front(), -0.15, 1e-15);
    EXPECT_NEAR(h.edges.back(), 0.15, 1e-15);
    EXPECT_EQ(h.total(), 6u);
    EXPECT_EQ(h.counts.front(), 2u);
    EXPECT_EQ(h.counts[14], 1u);
    EXPECT_EQ(h.counts[15], 1u);
    EXPECT_EQ(h.counts.back(), 2u);
}

TEST(RateCore, InversionStats) {
    const std::vector<double> s{0.01, 0.03, 0.02, -0.01};
    const std::vector<double> l{0.02, 0.01, 0.02, -0.02};
    const auto st = ltdr::inversion_stats(s, l, {});
    EXPECT_DOUBLE_EQ(st.fraction_inverted, 0.5);  // the tie at index 2 is not inverted
    ASSERT_EQ(st.spreads.size(), 4u);
    EXPECT_NEAR(st.spreads[1], -0.02, 1e-15);
    EXPECT_EQ(st.spread_histogram.total(), 4u);
    EXPECT_EQ(kind_of([&] { ltdr::inversion_stats(s, std::vector<double>{0.0}, {}); }), ErrorKind::Alignment);
}

TEST(RateCore, Correlation) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 1, 4, 3, 7};
    EXPECT_NEAR(ltdr::pearson_correlation(x, y), 0.8241633836921341, 1e-15);
    EXPECT_NEAR(ltdr::pearson_correlation(x, x), 1.0, 1e-15);
    EXPECT_EQ(kind_of([&] { ltdr::pearson_correlation(x, std::vector<double>(5, 1.0)); }),
              ErrorKind::UndefinedCorrelation);
    EXPECT_EQ(kind_of([] { ltdr::pearson_correlation(std::vector<double>{1, 2}, std::vector<double>{2, 1}); }),
              ErrorKind::InsufficientData);
}

TEST(RateCore, SeriesCorrelationAlignsYears) {
    TimeSeries a({1990, 12}, Frequency::Annual, {9, 1, 2, 3, 4, 5});
    TimeSeries b({1991, 12}, Frequency::Annual, {2, 1, 4, 3, 7, 100});
    EXPECT_NEAR(ltdr::series_correlation(a, b), 0.8241633836921341, 1e-15);
}

TEST(RateCore, Moments) {
    const std::vector<double> v{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(ltdr::mean(v), 2.5);
    EXPECT_DOUBLE_EQ(ltdr::sample_variance(v), 5.0 / 3.0);
    EXPECT_DOUBLE_EQ(ltdr::sample_stddev(v), std::sqrt(5.0 / 3.0));
}

}  // namespace
