// SPDX-License-Identifier: Apache-2.0
#include "ltdr/ingest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ltdr/error.hpp"
#include "ltdr/ratecore.hpp"

namespace ltdr {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(first, last - first + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
            cell.push_back(ch);
        } else if (ch == ',' && !quoted) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool parse_int(std::string_view s, int& out) {
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

// YYYY, YYYY-MM or YYYY-MM-DD.
bool parse_date(const std::string& s, Period& out, bool& has_month) {
    int year = 0;
    int month = 12;
    has_month = false;
    if (s.size() == 4) {
        if (!parse_int(s, year)) return false;
    } else if (s.size() == 7 || s.size() == 10) {
        if (s[4] != '-' || !parse_int(std::string_view(s).substr(0, 4), year) ||
            !parse_int(std::string_view(s).substr(5, 2), month)) {
            return false;
        }
        if (s.size() == 10) {
            int day = 0;
            if (s[7] != '-' || !parse_int(std::string_view(s).substr(8, 2), day) || day < 1 || day > 31) {
                return false;
            }
        }
        has_month = true;
    } else {
        return false;
    }
    if (month < 1 || month > 12) return false;
    out = {year, month};
    return true;
}

bool is_monthly(SeriesKind kind) { return kind == SeriesKind::MonthlyRatePercent; }
bool is_percent(SeriesKind kind) { return kind != SeriesKind::CpiIndexLevel && kind != SeriesKind::AnnualFraction; }

std::string hex(const unsigned char* data, unsigned len) {
    std::string out;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", data[i]);
        out += buf;
    }
    return out;
}

std::string sha256(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    return hex(md, len);
}

nlohmann::json describe(const TimeSeries& s) {
    return {{"start", s.start().to_string(s.frequency())},
            {"end", s.end().to_string(s.frequency())},
            {"frequency", s.frequency() == Frequency::Annual ? "annual" : "monthly"},
            {"observations", s.size()},
            {"distinct_years", s.distinct_years()},
            {"digest", series_digest(s)}};
}

}  // namespace

SeriesKind parse_series_kind(std::string_view text) {
    if (text == "annual_rate_percent") return SeriesKind::AnnualRatePercent;
    if (text == "monthly_rate_percent") return SeriesKind::MonthlyRatePercent;
    if (text == "cpi_growth_percent") return SeriesKind::CpiGrowthPercent;
    if (text == "cpi_index_level") return SeriesKind::CpiIndexLevel;
    if (text == "annual_fraction") return SeriesKind::AnnualFraction;
    throw Error(ErrorKind::Config, "unknown series kind '" + std::string(text) + "'");
}

const char* to_string(SeriesKind kind) noexcept {
    switch (kind) {
        case SeriesKind::AnnualRatePercent: return "annual_rate_percent";
        case SeriesKind::MonthlyRatePercent: return "monthly_rate_percent";
        case SeriesKind::CpiGrowthPercent: return "cpi_growth_percent";
        case SeriesKind::CpiIndexLevel: return "cpi_index_level";
        case SeriesKind::AnnualFraction: return "annual_fraction";
    }
    return "unknown";
}

TimeSeries parse_csv(std::string_view text, SeriesKind kind, const std::string& date_column,
                     const std::string& value_column, const std::string& source) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::ptrdiff_t date_idx = -1;
    std::ptrdiff_t value_idx = -1;

    // Skip leading blank lines, then read the header.
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
            line = line.substr(3);  // UTF-8 byte order mark
        }
        if (!trim(line).empty()) break;
    }
    const auto header = split_row(line);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == date_column) date_idx = static_cast<std::ptrdiff_t>(i);
        if (header[i] == value_column) value_idx = static_cast<std::ptrdiff_t>(i);
    }
    if (date_idx < 0 || value_idx < 0) {
        throw Error(ErrorKind::Parse, source + ": header must contain columns '" + date_column + "' and '" +
                                          value_column + "'");
    }

    const Frequency freq = is_monthly(kind) ? Frequency::Monthly : Frequency::Annual;
    std::vector<Period> periods;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        const auto where = source + ":" + std::to_string(line_no);
        if (static_cast<std::ptrdiff_t>(cells.size()) <= std::max(date_idx, value_idx)) {
            throw Error(ErrorKind::Parse, where + ": expected at least " +
                                              std::to_string(std::max(date_idx, value_idx) + 1) + " columns");
        }
        Period p;
        bool has_month = false;
        if (!parse_date(cells[static_cast<std::size_t>(date_idx)], p, has_month)) {
            throw Error(ErrorKind::Parse, where + ": unparseable date '" + cells[static_cast<std::size_t>(date_idx)] + "'");
        }
        if (freq == Frequency::Monthly && !has_month) {
            throw Error(ErrorKind::Parse, where + ": monthly series need YYYY-MM or YYYY-MM-DD dates");
        }
        if (freq == Frequency::Annual) p.month = 12;
        double v = 0.0;
        if (!parse_double(cells[static_cast<std::size_t>(value_idx)], v)) {
            throw Error(ErrorKind::Parse, where + ": unparseable value '" + cells[static_cast<std::size_t>(value_idx)] + "'");
        }
        if (!periods.empty()) {
            if (p == periods.back() || std::find(periods.begin(), periods.end(), p) != periods.end()) {
                throw Error(ErrorKind::DuplicateDate, where + ": duplicate date " + p.to_string(freq));
            }
            if (p < periods.back()) {
                throw Error(ErrorKind::Parse, where + ": dates must be strictly increasing");
            }
        }
        periods.push_back(p);
        values.push_back(is_percent(kind) ? v / 100.0 : v);
    }
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, source + ": no data rows");
    }

    std::vector<std::string> missing;
    for (std::size_t i = 1; i < periods.size(); ++i) {
        for (Period p = advance(periods[i - 1], freq, 1); p < periods[i]; p = advance(p, freq, 1)) {
            missing.push_back(p.to_string(freq));
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
            list += (i ? ", " : "") + missing[i];
        }
        if (missing.size() > 20) list += ", ...";
        throw Error(ErrorKind::MissingDates,
                    source + ": " + std::to_string(missing.size()) + " missing date(s): " + list);
    }
    return TimeSeries(periods.front(), freq, std::move(values));
}

TimeSeries load_csv(const RawSeriesFile& file) {
    std::ifstream in(file.path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + file.path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), file.kind, file.date_column, file.value_column, file.path.string());
}

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256(buf.str());
}

std::string series_digest(const TimeSeries& series) {
    std::string text = series.start().to_string(series.frequency());
    char buf[32];
    for (double v : series.values()) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        text += buf;
    }
    return sha256(text);
}

nlohmann::json PrepareOptions::to_json() const {
    return {{"cpi_form", cpi_form == CpiForm::IndexLevel ? "index_level" : "growth_fraction"},
            {"short_inflation_window", short_inflation_window},
            {"long_inflation_window", long_inflation_window},
            {"min_overlap_years", min_overlap_years}};
}

PrepareOptions PrepareOptions::from_json(const nlohmann::json& j) {
    PrepareOptions o;
    o.cpi_form = j.at("cpi_form").get<std::string>() == "index_level" ? CpiForm::IndexLevel : CpiForm::GrowthFraction;
    o.short_inflation_window = j.at("short_inflation_window").get<int>();
    o.long_inflation_window = j.at("long_inflation_window").get<int>();
    o.min_overlap_years = j.at("min_overlap_years").get<int>();
    return o;
}

TimeSeries cpi_growth_from_levels(const TimeSeries& levels) {
    const TimeSeries annual = to_annual(levels);
    if (annual.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "CPI levels need at least two years to form growth rates");
    }
    std::vector<double> growth(annual.size() - 1);
    for (std::size_t i = 1; i < annual.size(); ++i) {
        if (!(annual[i - 1] > 0.0) || !(annual[i] > 0.0)) {
            throw Error(ErrorKind::Domain, "CPI index levels must be positive");
        }
        growth[i - 1] = annual[i] / annual[i - 1] - 1.0;
    }
    return TimeSeries(annual.period_at(1), Frequency::Annual, std::move(growth));
}

PreparedDataset prepare_dataset(const TimeSeries& nominal_3m, const TimeSeries& nominal_10y, const TimeSeries& cpi,
                                const PrepareOptions& options) {
    if (options.short_inflation_window < 1 || options.long_inflation_window < 1) {
        throw Error(ErrorKind::Config, "inflation windows must be at least one year");
    }
    PreparedDataset out;
    nlohmann::json steps = nlohmann::json::array();

    const TimeSeries short_annual = to_annual(nominal_3m);
    const TimeSeries long_annual = to_annual(nominal_10y);
    if (nominal_3m.frequency() == Frequency::Monthly) {
        steps.push_back({{"step", "sample_year_end"}, {"series", "nominal_3m"}, {"rule", "latest month in each year"}});
    }
    if (nominal_10y.frequency() == Frequency::Monthly) {
        steps.push_back({{"step", "sample_year_end"}, {"series", "nominal_10y"}, {"rule", "latest month in each year"}});
    }
    TimeSeries growth = options.cpi_form == CpiForm::IndexLevel ? cpi_growth_from_levels(cpi) : to_annual(cpi);
    if (options.cpi_form == CpiForm::IndexLevel) {
        steps.push_back({{"step", "cpi_levels_to_growth"}, {"rule", "I(Y)/I(Y-1) - 1 dated Y"}});
    }

    const int first = std::max({short_annual.start().year, long_annual.start().year, growth.start().year});
    const int last = std::min({short_annual.end().year, long_annual.end().year, growth.end().year});
    const int overlap = std::max(0, last - first + 1);
    if (overlap < options.min_overlap_years) {
        throw Error(ErrorKind::InsufficientData, "series overlap " + std::to_string(overlap) +
                                                     " years after alignment; at least " +
                                                     std::to_string(options.min_overlap_years) + " required");
    }

    auto yield_series = [](const TimeSeries& s) {
        std::vector<double> v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) v[i] = yield_from_annual_rate(s[i]);
        return TimeSeries(s.start(), Frequency::Annual, std::move(v));
    };
    out.nominal_3m = yield_series(short_annual);
    out.nominal_10y = yield_series(long_annual);
    out.inflation_annual = growth;
    steps.push_back({{"step", "log_yield"}, {"rule", "ln(1 + beta)"}});

    // Real rate for every year where the inflation window lies inside the CPI
    // series. `lead` is the offset of the window start from the observation year.
    auto build_real = [&](const TimeSeries& yields, int window, int lead, TimeSeries& inflation_out) {
        const int lo = std::max(yields.start().year, growth.start().year - lead);
        const int hi = std::min(yields.end().year, growth.end().year - lead - window + 1);
        if (hi < lo) {
            throw Error(ErrorKind::InsufficientData, "CPI series does not cover any inflation window");
        }
        std::vector<double> real;
        std::vector<double> infl;
        for (int y = lo; y <= hi; ++y) {
            const auto g_idx = static_cast<std::size_t>(growth.index_of({y + lead, 12}));
            const double i_rate = inflation_rate(growth, g_idx, window);
            infl.push_back(i_rate);
            real.push_back(fisher_real_rate(yields[static_cast<std::size_t>(yields.index_of({y, 12}))], i_rate));
        }
        inflation_out = TimeSeries({lo, 12}, Frequency::Annual, std::move(infl));
        return TimeSeries({lo, 12}, Frequency::Annual, std::move(real));
    };

    out.three_month_real = {build_real(out.nominal_3m, options.short_inflation_window, 0, out.three_month_inflation),
                            Maturity::ThreeMonth};
    steps.push_back({{"step", "real_rate"},
                     {"series", "three_month"},
                     {"rule", "ln(1+beta) - mean ln(1+g) over years Y..Y+w-1"},
                     {"window", options.short_inflation_window}});
    out.ten_year_real = {build_real(out.nominal_10y, options.long_inflation_window, 1, out.ten_year_inflation),
                         Maturity::TenYear};
    steps.push_back({{"step", "real_rate"},
                     {"series", "ten_year"},
                     {"rule", "ln(1+beta) - mean ln(1+g) over years Y+1..Y+w"},
                     {"window", options.long_inflation_window}});

    for (const auto* s : {&out.three_month_real, &out.ten_year_real}) {
        const TimeSeries& b = s->base;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(std::abs(b[i]) < 1.0)) {
                out.warnings.push_back(std::string(s->maturity == Maturity::ThreeMonth ? "three_month" : "ten_year") +
                                       " real rate " + std::to_string(b[i]) + " at " +
                                       b.period_at(i).to_string(Frequency::Annual) +
                                       " lies outside (-1, 1); check percent/fraction units");
            }
        }
    }

    out.provenance = {{"inputs",
                       {{"nominal_3m", describe(nominal_3m)},
                        {"nominal_10y", describe(nominal_10y)},
                        {"cpi", describe(cpi)}}},
                      {"options", options.to_json()},
                      {"overlap_years", overlap},
                      {"steps", steps},
                      {"outputs",
                       {{"three_month_real", describe(out.three_month_real.base)},
                        {"ten_year_real", describe(out.ten_year_real.base)}}},
                      {"warnings", out.warnings}};
    return out;
}

}  // namespace ltdr
