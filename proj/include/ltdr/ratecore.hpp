// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "ltdr/timeseries.hpp"

namespace ltdr {

/// Continuously compounded yield of a zero-coupon bond quoted at annual
/// rate `beta`: ln(1 + beta). Throws Domain for beta <= -1.
double yield_from_annual_rate(double beta);

/// Forward average log inflation over `tau_years` growth entries starting at
/// index `t` of an annual CPI growth series (fractions).
double inflation_rate(const TimeSeries& cpi_annual_growth, std::size_t t, int tau_years);

inline double fisher_real_rate(double nominal, double inflation) { return nominal - inflation; }

/// Fraction of strictly negative observations. Zeros are non-negative.
double negative_fraction(const RealRateSeries& series);
double negative_fraction(std::span<const double> values);

/// Fixed-width histogram. Values outside [lo, hi) are counted in the edge bins
/// so the counts always sum to the number of inputs.
struct HistogramSpec {
    double lo = -0.15;
    double hi = 0.15;
    double width = 0.01;

    std::size_t bins() const;
};

struct Histogram {
    std::vector<double> edges;  // bins() + 1 entries
    std::vector<std::size_t> counts;

    std::size_t total() const;
};

Histogram make_histogram(std::span<const double> values, const HistogramSpec& spec);

struct InversionStats {
    double fraction_inverted = 0.0;
    std::vector<double> spreads;  // 10y - 3m per overlapping year
    Histogram spread_histogram;
};

/// Spread statistics of (10y - 3m). A zero spread counts as not inverted.
InversionStats inversion_stats(const RealRateSeries& three_month, const RealRateSeries& ten_year,
                               const HistogramSpec& bins = {});
InversionStats inversion_stats(std::span<const double> three_month, std::span<const double> ten_year,
                               const HistogramSpec& bins = {});

/// Pearson correlation over the annually aligned overlap (at least 3 points).
double series_correlation(const TimeSeries& a, const TimeSeries& b);
double pearson_correlation(std::span<const double> a, std::span<const double> b);

// Small descriptive helpers shared by the other modules.
double mean(std::span<const double> values);
/// Sample variance with the n - 1 denominator.
double sample_variance(std::span<const double> values);
double sample_stddev(std::span<const double> values);

}  // namespace ltdr
