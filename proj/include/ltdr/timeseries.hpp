// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ltdr {

enum class Frequency { Annual, Monthly };

/// Calendar period an observation belongs to. Annual series only use `year`
/// and carry month 12 (year-end convention).
struct Period {
    int year = 0;
    int month = 12;

    auto operator<=>(const Period&) const = default;

    std::string to_string(Frequency f) const;
};

Period advance(Period p, Frequency f, std::ptrdiff_t steps);

/// Timestamped scalar observations at a fixed frequency with no gaps.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(Period start, Frequency frequency, std::vector<double> values);

    Period start() const noexcept { return start_; }
    Period end() const;
    Frequency frequency() const noexcept { return frequency_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    Period period_at(std::size_t i) const;

    /// Index of the observation for `p`, or -1 when outside the series.
    std::ptrdiff_t index_of(Period p) const;

    /// Number of distinct calendar years touched by the series.
    std::size_t distinct_years() const;

    /// Contiguous sub-range [first, first + count).
    TimeSeries slice(std::size_t first, std::size_t count) const;

private:
    Period start_{};
    Frequency frequency_ = Frequency::Annual;
    std::vector<double> values_;
};

/// Annual view of a series: for monthly input, the latest observation inside
/// each calendar year (December when present).
TimeSeries to_annual(const TimeSeries& series);

enum class Maturity { ThreeMonth, TenYear };

struct RealRateSeries {
    TimeSeries base;  // fraction per year; negative values are legal
    Maturity maturity = Maturity::ThreeMonth;
};

/// Pairs of annually aligned values over the overlapping years of `a` and `b`.
struct AlignedPair {
    std::vector<int> years;
    std::vector<double> a;
    std::vector<double> b;
};

AlignedPair align_annual(const TimeSeries& a, const TimeSeries& b);

}  // namespace ltdr
