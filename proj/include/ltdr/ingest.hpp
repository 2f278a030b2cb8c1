// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ltdr/timeseries.hpp"

namespace ltdr {

/// annual_fraction reads series already expressed as fractions, such as the
/// prepared real-rate files.
enum class SeriesKind { AnnualRatePercent, MonthlyRatePercent, CpiGrowthPercent, CpiIndexLevel, AnnualFraction };

SeriesKind parse_series_kind(std::string_view text);
const char* to_string(SeriesKind kind) noexcept;

struct RawSeriesFile {
    std::filesystem::path path;
    SeriesKind kind = SeriesKind::AnnualRatePercent;
    std::string date_column = "date";
    std::string value_column = "value";
};

/// Reads a comma-separated file with a header row. Dates are ISO-8601
/// (YYYY-MM-DD or YYYY-MM) or a bare year for annual kinds. Percent kinds are
/// converted to fractions. Gaps, duplicates and unordered dates are errors.
TimeSeries load_csv(const RawSeriesFile& file);

/// Same as load_csv on in-memory text; `source` names the input in errors.
TimeSeries parse_csv(std::string_view text, SeriesKind kind, const std::string& date_column,
                     const std::string& value_column, const std::string& source = "<memory>");

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

enum class CpiForm { GrowthFraction, IndexLevel };

struct PrepareOptions {
    CpiForm cpi_form = CpiForm::GrowthFraction;
    int short_inflation_window = 1;   ///< years of inflation netted from the 3-month rate
    int long_inflation_window = 10;   ///< forward smoothing window for the 10-year rate
    int min_overlap_years = 30;

    nlohmann::json to_json() const;
    static PrepareOptions from_json(const nlohmann::json& j);
};

struct PreparedDataset {
    RealRateSeries three_month_real;
    RealRateSeries ten_year_real;
    TimeSeries nominal_3m;        ///< annual continuously compounded yields ln(1 + beta)
    TimeSeries nominal_10y;
    TimeSeries inflation_annual;  ///< calendar-year CPI growth, fractions
    TimeSeries three_month_inflation;  ///< inflation netted per 3-month observation
    TimeSeries ten_year_inflation;     ///< forward-average inflation per 10-year observation
    nlohmann::json provenance;
    std::vector<std::string> warnings;
};

/// Annual CPI growth I(t)/I(t-1) - 1 from index levels, dated by the year in
/// which the growth occurs.
TimeSeries cpi_growth_from_levels(const TimeSeries& levels);

/// Builds real-rate series from nominal annual rates (fractions) and CPI:
///   3-month real(Y) = ln(1 + beta_3m(Y)) - ln(1 + g(Y))
///   10-year real(Y) = ln(1 + beta_10y(Y)) - mean_{j=1..10} ln(1 + g(Y + j))
/// where g(Y) is the CPI growth during calendar year Y and observations are
/// dated at year-end. Monthly inputs are sampled at the latest month of each
/// year. The 10-year series ends 10 years before the CPI series does.
PreparedDataset prepare_dataset(const TimeSeries& nominal_3m, const TimeSeries& nominal_10y, const TimeSeries& cpi,
                                const PrepareOptions& options = {});

/// Digest of a series' dates and values, used in provenance records.
std::string series_digest(const TimeSeries& series);

}  // namespace ltdr
