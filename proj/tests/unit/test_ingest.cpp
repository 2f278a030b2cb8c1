// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ltdr/error.hpp"
#include "ltdr/ingest.hpp"

namespace {

using ltdr::ErrorKind;
using ltdr::Frequency;
using ltdr::SeriesKind;
using ltdr::TimeSeries;

ltdr::Error error_of(std::string_view text, SeriesKind kind = SeriesKind::AnnualRatePercent) {
    try {
        ltdr::parse_csv(text, kind, "date", "value", "in.csv");
    } catch (const ltdr::Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error thrown";
    return ltdr::Error(ErrorKind::Config, "");
}

TimeSeries annual(int start, std::vector<double> v) { return TimeSeries({start, 12}, Frequency::Annual, std::move(v)); }

TEST(Ingest, PercentToFraction) {
    const auto s = ltdr::parse_csv("date,value\n1900,5.0\n1901,4.0\n", SeriesKind::AnnualRatePercent, "date", "value");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[0], 0.05);
    EXPECT_DOUBLE_EQ(s[1], 0.04);
    EXPECT_EQ(s.start().year, 1900);
}

TEST(Ingest, ColumnsByNameAndDateForms) {
    const auto s = ltdr::parse_csv("\xEF\xBB\xBFnote,\"rate\",day\r\nx,1.5,2000-01-31\r\ny,2.5,2000-02-29\r\n",
                                   SeriesKind::MonthlyRatePercent, "day", "rate");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.frequency(), Frequency::Monthly);
    EXPECT_EQ(s.start(), (ltdr::Period{2000, 1}));
    EXPECT_DOUBLE_EQ(s[1], 0.025);
    const auto idx = ltdr::parse_csv("date,value\n1990,100\n1991,103\n", SeriesKind::CpiIndexLevel, "date", "value");
    EXPECT_EQ(idx[1], 103.0);
    const auto ym = ltdr::parse_csv("date,value\n1990-12,1\n1991-12,2\n", SeriesKind::AnnualFraction, "date", "value");
    EXPECT_EQ(ym[1], 2.0);
}

TEST(Ingest, Errors) {
    EXPECT_EQ(error_of("date,value\n1900,5\n1900,4\n").kind(), ErrorKind::DuplicateDate);
    const auto gap = error_of("date,value\n1900,5\n1901,4\n1904,3\n");
    EXPECT_EQ(gap.kind(), ErrorKind::MissingDates);
    EXPECT_NE(std::string(gap.what()).find("1902, 1903"), std::string::npos);
    const auto bad = error_of("date,value\n1900,5\n1901,abc\n");
    EXPECT_EQ(bad.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(bad.what()).find("in.csv:3"), std::string::npos);
    EXPECT_EQ(error_of("date,value\n1900,5\n19x1,4\n").kind(), ErrorKind::Parse);
    EXPECT_EQ(error_of("date,value\n1901,5\n1900,4\n").kind(), ErrorKind::Parse);
    EXPECT_EQ(error_of("when,value\n1900,5\n").kind(), ErrorKind::Parse);
    EXPECT_EQ(error_of("date,value\n1900\n").kind(), ErrorKind::Parse);
    EXPECT_EQ(error_of("date,value\n1900,5\n", SeriesKind::MonthlyRatePercent).kind(), ErrorKind::Parse);
    EXPECT_EQ(error_of("date,value\n2000-13,5\n", SeriesKind::MonthlyRatePercent).kind(), ErrorKind::Parse);
    EXPECT_EQ(error_of("date,value\n").kind(), ErrorKind::EmptyInput);
    const auto mgap = error_of("date,value\n2000-11,1\n2001-02,1\n", SeriesKind::MonthlyRatePercent);
    EXPECT_NE(std::string(mgap.what()).find("2000-12, 2001-01"), std::string::npos);
}

TEST(Ingest, MissingFileNamesPath) {
    try {
        ltdr::load_csv({"/nonexistent/cpi.csv", SeriesKind::CpiGrowthPercent});
        FAIL();
    } catch (const ltdr::Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
        EXPECT_TRUE(e.is_ingest());
        EXPECT_NE(std::string(e.what()).find("/nonexistent/cpi.csv"), std::string::npos);
    }
}

TEST(Ingest, FileDigest) {
    const auto path = std::filesystem::temp_directory_path() / "ltdr_digest_test.txt";
    std::ofstream(path) << "abc";
    EXPECT_EQ(ltdr::file_sha256(path), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::filesystem::remove(path);
}

TEST(Ingest, SeriesKindNames) {
    for (auto k : {SeriesKind::AnnualRatePercent, SeriesKind::MonthlyRatePercent, SeriesKind::CpiGrowthPercent,
                   SeriesKind::CpiIndexLevel, SeriesKind::AnnualFraction}) {
        EXPECT_EQ(ltdr::parse_series_kind(ltdr::to_string(k)), k);
    }
    EXPECT_THROW(ltdr::parse_series_kind("weekly"), ltdr::Error);
}

TEST(Ingest, FlatRatesGiveConstantRealRates) {
    const auto n = annual(1950, std::vector<double>(40, 0.05));
    const auto cpi = annual(1950, std::vector<double>(50, 0.03));
    const auto d = ltdr::prepare_dataset(n, n, cpi);
    ASSERT_EQ(d.three_month_real.base.size(), 40u);
    ASSERT_EQ(d.ten_year_real.base.size(), 40u);
    for (double v : d.three_month_real.base.values()) EXPECT_NEAR(v, 0.01923136192788760, 1e-16);
    for (double v : d.ten_year_real.base.values()) EXPECT_NEAR(v, 0.01923136192788760, 1e-16);
    EXPECT_TRUE(d.warnings.empty());
}

TEST(Ingest, ZeroInflationLeavesYields) {
    std::vector<double> v;
    for (int i = 0; i < 40; ++i) v.push_back(0.01 * std::sin(i));
    const auto n = annual(1950, v);
    const auto d = ltdr::prepare_dataset(n, n, annual(1950, std::vector<double>(50, 0.0)));
    for (std::size_t i = 0; i < v.size(); ++i) {
        EXPECT_DOUBLE_EQ(d.three_month_real.base[i], std::log1p(v[i]));
        EXPECT_DOUBLE_EQ(d.ten_year_real.base[i], std::log1p(v[i]));
    }
}

TEST(Ingest, InflationWindows) {
    std::vector<double> g;
    for (int i = 0; i < 60; ++i) g.push_back(0.001 * i);
    const auto cpi = annual(1940, g);
    const auto n = annual(1950, std::vector<double>(40, 0.05));
    const auto d = ltdr::prepare_dataset(n, n, cpi);
    // 3-month: same calendar year. 10-year: the following ten years.
    EXPECT_NEAR(d.three_month_real.base[0], std::log(1.05) - std::log1p(0.010), 1e-16);
    double s = 0.0;
    for (int j = 1; j <= 10; ++j) s += std::log1p(0.001 * (10 + j));
    EXPECT_NEAR(d.ten_year_real.base[0], std::log(1.05) - s / 10, 1e-16);
}

TEST(Ingest, LongerCpiCoversFullBondRange) {
    const auto n = annual(1950, std::vector<double>(40, 0.05));
    const auto d = ltdr::prepare_dataset(n, n, annual(1950, std::vector<double>(50, 0.02)));
    EXPECT_EQ(d.ten_year_real.base.start().year, 1950);
    EXPECT_EQ(d.ten_year_real.base.end().year, 1989);
    // CPI ending with the bonds: the 10-year series stops ten years earlier.
    const auto e = ltdr::prepare_dataset(n, n, annual(1950, std::vector<double>(40, 0.02)));
    EXPECT_EQ(e.ten_year_real.base.end().year, 1979);
    EXPECT_EQ(e.three_month_real.base.end().year, 1989);
    EXPECT_LE(e.ten_year_real.base.end().year, e.inflation_annual.end().year - 10);
}

TEST(Ingest, MonthlyInputSampledAtYearEnd) {
    std::vector<double> m;
    for (int i = 0; i < 40 * 12; ++i) m.push_back((i % 12 == 11) ? 0.05 : 0.5);
    const TimeSeries monthly({1950, 1}, Frequency::Monthly, m);
    const auto d = ltdr::prepare_dataset(monthly, annual(1950, std::vector<double>(40, 0.05)),
                                         annual(1950, std::vector<double>(50, 0.03)));
    for (double v : d.three_month_real.base.values()) EXPECT_NEAR(v, 0.01923136192788760, 1e-16);
}

TEST(Ingest, InsufficientOverlap) {
    const auto n = annual(1950, std::vector<double>(20, 0.05));
    try {
        ltdr::prepare_dataset(n, n, annual(1950, std::vector<double>(40, 0.02)));
        FAIL();
    } catch (const ltdr::Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
        EXPECT_NE(std::string(e.what()).find("20"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("30"), std::string::npos);
    }
}

TEST(Ingest, CpiLevels) {
    const auto levels = annual(1949, {100.0, 103.0, 106.09});
    const auto g = ltdr::cpi_growth_from_levels(levels);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g.start().year, 1950);
    EXPECT_NEAR(g[0], 0.03, 1e-15);
    EXPECT_NEAR(g[1], 0.03, 1e-15);
    EXPECT_THROW(ltdr::cpi_growth_from_levels(annual(1950, {100.0})), ltdr::Error);

    std::vector<double> lv{100.0};
    for (int i = 0; i < 50; ++i) lv.push_back(lv.back() * 1.03);
    ltdr::PrepareOptions opt;
    opt.cpi_form = ltdr::CpiForm::IndexLevel;
    const auto n = annual(1950, std::vector<double>(40, 0.05));
    const auto d = ltdr::prepare_dataset(n, n, annual(1949, lv), opt);
    for (double v : d.ten_year_real.base.values()) EXPECT_NEAR(v, 0.01923136192788760, 1e-14);
}

TEST(Ingest, UnitWarning) {
    const auto n = annual(1950, std::vector<double>(40, 5.0));  // percent passed as fraction
    const auto d = ltdr::prepare_dataset(n, n, annual(1950, std::vector<double>(50, 0.02)));
    EXPECT_FALSE(d.warnings.empty());
    EXPECT_FALSE(d.provenance.at("warnings").empty());
}

TEST(Ingest, ProvenanceReplays) {
    std::vector<double> v;
    for (int i = 0; i < 45; ++i) v.push_back(0.03 + 0.02 * std::cos(i));
    const auto n = annual(1950, v);
    const auto cpi = annual(1945, std::vector<double>(70, 0.025));
    ltdr::PrepareOptions opt;
    opt.long_inflation_window = 7;
    opt.min_overlap_years = 35;
    const auto a = ltdr::prepare_dataset(n, n, cpi, opt);
    const auto replay = ltdr::PrepareOptions::from_json(a.provenance.at("options"));
    const auto b = ltdr::prepare_dataset(n, n, cpi, replay);
    EXPECT_EQ(a.provenance, b.provenance);
    EXPECT_EQ(a.ten_year_real.base.start(), b.ten_year_real.base.start());
    EXPECT_TRUE(std::equal(a.ten_year_real.base.values().begin(), a.ten_year_real.base.values().end(),
                           b.ten_year_real.base.values().begin()));
    EXPECT_EQ(a.provenance.at("outputs").at("ten_year_real").at("digest"), ltdr::series_digest(b.ten_year_real.base));
    EXPECT_EQ(a.provenance.at("steps").size(), 3u);  // log yields and the two real-rate rules
}

}  // namespace
