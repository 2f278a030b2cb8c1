// SPDX-License-Identifier: Apache-2.0
#include "ltdr/timeseries.hpp"

#include <cstdio>
#include <map>

#include "ltdr/error.hpp"

namespace ltdr {

std::string Period::to_string(Frequency f) const {
    char buf[16];
    if (f == Frequency::Annual) {
        std::snprintf(buf, sizeof buf, "%04d", year);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    }
    return buf;
}

Period advance(Period p, Frequency f, std::ptrdiff_t steps) {
    if (f == Frequency::Annual) {
        return {p.year + static_cast<int>(steps), 12};
    }
    const std::ptrdiff_t months = static_cast<std::ptrdiff_t>(p.year) * 12 + (p.month - 1) + steps;
    const auto year = static_cast<int>(months >= 0 ? months / 12 : (months - 11) / 12);
    const auto month = static_cast<int>(months - static_cast<std::ptrdiff_t>(year) * 12) + 1;
    return {year, month};
}

TimeSeries::TimeSeries(Period start, Frequency frequency, std::vector<double> values)
    : start_(start), frequency_(frequency), values_(std::move(values)) {
    if (values_.empty()) {
        throw Error(ErrorKind::EmptyInput, "time series must contain at least one observation");
    }
    if (frequency_ == Frequency::Annual) {
        start_.month = 12;
    } else if (start_.month < 1 || start_.month > 12) {
        throw Error(ErrorKind::Domain, "month out of range in series start");
    }
}

Period TimeSeries::end() const {
    if (values_.empty()) {
        throw Error(ErrorKind::EmptyInput, "empty series has no end period");
    }
    return period_at(values_.size() - 1);
}

Period TimeSeries::period_at(std::size_t i) const {
    return advance(start_, frequency_, static_cast<std::ptrdiff_t>(i));
}

std::ptrdiff_t TimeSeries::index_of(Period p) const {
    std::ptrdiff_t offset = 0;
    if (frequency_ == Frequency::Annual) {
        offset = p.year - start_.year;
    } else {
        offset = (static_cast<std::ptrdiff_t>(p.year) * 12 + p.month) -
                 (static_cast<std::ptrdiff_t>(start_.year) * 12 + start_.month);
    }
    if (offset < 0 || offset >= static_cast<std::ptrdiff_t>(values_.size())) {
        return -1;
    }
    return offset;
}

std::size_t TimeSeries::distinct_years() const {
    if (values_.empty()) {
        return 0;
    }
    return static_cast<std::size_t>(end().year - start_.year + 1);
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size() || count == 0) {
        throw Error(ErrorKind::Bounds, "slice outside series");
    }
    return TimeSeries(period_at(first), frequency_,
                      std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                          values_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

TimeSeries to_annual(const TimeSeries& series) {
    if (series.frequency() == Frequency::Annual) {
        return series;
    }
    // Latest observation of each calendar year; the series has no gaps so
    // every year between start and end is present.
    std::vector<double> out;
    const int first_year = series.start().year;
    const int last_year = series.end().year;
    out.reserve(static_cast<std::size_t>(last_year - first_year + 1));
    for (int y = first_year; y <= last_year; ++y) {
        const Period year_end{y, 12};
        Period candidate = year_end;
        if (y == last_year) {
            candidate = series.end();
        }
        const auto idx = series.index_of(candidate);
        out.push_back(series[static_cast<std::size_t>(idx)]);
    }
    return TimeSeries({first_year, 12}, Frequency::Annual, std::move(out));
}

AlignedPair align_annual(const TimeSeries& a, const TimeSeries& b) {
    const TimeSeries aa = to_annual(a);
    const TimeSeries bb = to_annual(b);
    AlignedPair out;
    const int first = std::max(aa.start().year, bb.start().year);
    const int last = std::min(aa.end().year, bb.end().year);
    if (first > last) {
        throw Error(ErrorKind::Alignment, "series do not overlap: " + aa.start().to_string(Frequency::Annual) +
                                              ".." + aa.end().to_string(Frequency::Annual) + " vs " +
                                              bb.start().to_string(Frequency::Annual) + ".." +
                                              bb.end().to_string(Frequency::Annual));
    }
    for (int y = first; y <= last; ++y) {
        out.years.push_back(y);
        out.a.push_back(aa[static_cast<std::size_t>(aa.index_of({y, 12}))]);
        out.b.push_back(bb[static_cast<std::size_t>(bb.index_of({y, 12}))]);
    }
    return out;
}

}  // namespace ltdr
