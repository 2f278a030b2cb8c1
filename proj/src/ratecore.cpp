// SPDX-License-Identifier: Apache-2.0
#include "ltdr/ratecore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ltdr/error.hpp"

namespace ltdr {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Bounds: return "bounds";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::Alignment: return "alignment";
        case ErrorKind::UndefinedCorrelation: return "undefined-correlation";
        case ErrorKind::DegenerateVariance: return "degenerate-variance";
        case ErrorKind::NonMeanReverting: return "non-mean-reverting";
        case ErrorKind::FitFailure: return "fit-failure";
        case ErrorKind::IllConditioned: return "ill-conditioned";
        case ErrorKind::TooManyFailures: return "too-many-failures";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::MissingDates: return "missing-dates";
        case ErrorKind::DuplicateDate: return "duplicate-date";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Io: return "io";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

double yield_from_annual_rate(double beta) {
    if (!(beta > -1.0)) {
        throw Error(ErrorKind::Domain, "annual rate must exceed -1, got " + std::to_string(beta));
    }
    return std::log1p(beta);
}

double inflation_rate(const TimeSeries& cpi_annual_growth, std::size_t t, int tau_years) {
    if (tau_years < 1) {
        throw Error(ErrorKind::Domain, "inflation window must be at least one year");
    }
    const auto tau = static_cast<std::size_t>(tau_years);
    if (t + tau > cpi_annual_growth.size()) {
        throw Error(ErrorKind::Bounds, "inflation window [" + std::to_string(t) + ", " +
                                           std::to_string(t + tau - 1) + "] outside series of length " +
                                           std::to_string(cpi_annual_growth.size()));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < tau; ++j) {
        sum += yield_from_annual_rate(cpi_annual_growth[t + j]);
    }
    return sum / static_cast<double>(tau);
}

double negative_fraction(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, "negative fraction of an empty series");
    }
    const auto negatives = std::count_if(values.begin(), values.end(), [](double v) { return v < 0.0; });
    return static_cast<double>(negatives) / static_cast<double>(values.size());
}

double negative_fraction(const RealRateSeries& series) { return negative_fraction(series.base.values()); }

std::size_t HistogramSpec::bins() const {
    if (!(width > 0.0) || !(hi > lo)) {
        throw Error(ErrorKind::Domain, "histogram needs hi > lo and width > 0");
    }
    return static_cast<std::size_t>(std::llround(std::ceil((hi - lo) / width - 1e-9)));
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram make_histogram(std::span<const double> values, const HistogramSpec& spec) {
    const std::size_t n = spec.bins();
    Histogram h;
    h.edges.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        h.edges[i] = spec.lo + spec.width * static_cast<double>(i);
    }
    h.counts.assign(n, 0);
    for (double v : values) {
        const double pos = std::floor((v - spec.lo) / spec.width);
        const auto idx = static_cast<std::ptrdiff_t>(std::clamp(pos, 0.0, static_cast<double>(n - 1)));
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

InversionStats inversion_stats(std::span<const double> three_month, std::span<const double> ten_year,
                               const HistogramSpec& bins) {
    if (three_month.size() != ten_year.size()) {
        throw Error(ErrorKind::Alignment, "spread inputs must have equal length");
    }
    if (three_month.empty()) {
        throw Error(ErrorKind::Alignment, "no overlapping observations");
    }
    InversionStats out;
    out.spreads.resize(three_month.size());
    std::size_t inverted = 0;
    for (std::size_t i = 0; i < three_month.size(); ++i) {
        out.spreads[i] = ten_year[i] - three_month[i];
        if (out.spreads[i] < 0.0) {
            ++inverted;
        }
    }
    out.fraction_inverted = static_cast<double>(inverted) / static_cast<double>(three_month.size());
    out.spread_histogram = make_histogram(out.spreads, bins);
    return out;
}

InversionStats inversion_stats(const RealRateSeries& three_month, const RealRateSeries& ten_year,
                               const HistogramSpec& bins) {
    const AlignedPair aligned = align_annual(three_month.base, ten_year.base);
    return inversion_stats(aligned.a, aligned.b, bins);
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, "mean of an empty series");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorKind::EmptyInput, "sample variance needs at least two observations");
    }
    const double mu = mean(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mu) * (v - mu);
    }
    return ss / static_cast<double>(values.size() - 1);
}

double sample_stddev(std::span<const double> values) { return std::sqrt(sample_variance(values)); }

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::Alignment, "correlation inputs must have equal length");
    }
    if (a.size() < 3) {
        throw Error(ErrorKind::InsufficientData, "correlation needs at least 3 overlapping points");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw Error(ErrorKind::UndefinedCorrelation, "correlation undefined for a constant series");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double series_correlation(const TimeSeries& a, const TimeSeries& b) {
    const AlignedPair aligned = align_annual(a, b);
    return pearson_correlation(aligned.a, aligned.b);
}

}  // namespace ltdr
