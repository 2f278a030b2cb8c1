// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <utility>
#include <vector>

#include "ltdr/error.hpp"
#include "ltdr/ingest.hpp"
#include "ltdr/oumodel.hpp"
#include "ltdr/simulation.hpp"
#include "output.hpp"
#include "svg.hpp"

#ifndef LTDR_VERSION
#define LTDR_VERSION "0.0.0"
#endif

namespace ltdr::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j.at(key).is_null()) {
        out = j.at(key).get<T>();
    } else {
        out.reset();
    }
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

struct OutputLog {
    fs::path dir;
    json files = json::array();

    void put(const std::string& name, const std::string& bytes) {
        const std::string digest = write_file(dir / name, bytes);
        files.push_back({{"file", name}, {"sha256", digest}});
    }
};

json input_record(const std::string& path) {
    return {{"path", path}, {"sha256", file_sha256(path)}};
}

// The manifest leaves out the output directory and thread count: neither
// changes the bytes written.
void write_manifest(OutputLog& log, const std::string& command, const json& arguments, const json& inputs) {
    json m = {{"tool", "ltdr"},
              {"version", LTDR_VERSION},
              {"command", command},
              {"arguments", arguments},
              {"inputs", inputs},
              {"outputs", log.files}};
    write_file(log.dir / "manifest.json", json_text(m));
}

json params_json(const OuParams& p, double q) {
    return {{"m", json_number(p.m)},
            {"k", json_number(p.k)},
            {"alpha", json_number(p.alpha)},
            {"sigma", json_number(p.sigma())},
            {"q", json_number(q)}};
}

json band_json(const Band& b) { return {{"q05", json_number(b.lo)}, {"q95", json_number(b.hi)}}; }

int ingest_code(const Error& e) { return e.kind() == ErrorKind::Config ? kUsage : kIngest; }

json error_payload(const Error& e, const std::string& stage) {
    return {{"error", to_string(e.kind())}, {"message", e.what()}, {"stage", stage}};
}

std::vector<std::string> year_labels(const TimeSeries& s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(std::to_string(s.period_at(i).year));
    return out;
}

std::vector<double> values_for_years(const TimeSeries& source, const TimeSeries& years) {
    std::vector<double> out;
    for (std::size_t i = 0; i < years.size(); ++i) {
        const auto idx = source.index_of(years.period_at(i));
        out.push_back(idx < 0 ? std::numeric_limits<double>::quiet_NaN() : source[static_cast<std::size_t>(idx)]);
    }
    return out;
}

std::string real_series_csv(const RealRateSeries& real, const TimeSeries& nominal, const TimeSeries& inflation) {
    const TimeSeries& b = real.base;
    return csv_text("date", year_labels(b),
                    {{"nominal_yield", values_for_years(nominal, b)},
                     {"inflation", values_for_years(inflation, b)},
                     {"real_rate", std::vector<double>(b.values().begin(), b.values().end())}});
}

struct LoadedReport {
    OuParams params;
    double q = 0.0;
    std::uint64_t seed = 1;
    double last_three_month = 0.0;
    BiasCorrectionConfig bias;
    json raw;
};

LoadedReport load_report(const std::string& path) {
    LoadedReport r;
    try {
        r.raw = json::parse(read_file(path));
        const json& p = r.raw.at("params");
        r.params = {p.at("m").get<double>(), p.at("k").get<double>(), p.at("alpha").get<double>()};
        r.q = p.at("q").get<double>();
        r.params.validate();
        r.seed = r.raw.at("seed").get<std::uint64_t>();
        r.last_three_month = r.raw.at("data").at("last_three_month").get<double>();
        const json& s = r.raw.at("simulation");
        r.bias.replicates = s.at("replicates").get<std::size_t>();
        r.bias.steps_per_year = s.at("steps_per_year").get<int>();
        r.bias.years = s.at("years").get<int>();
        read_opt(s, "ten_year_target_std", r.bias.ten_year_target_std);
    } catch (const json::exception& e) {
        throw CommandError(kReporting, "malformed report " + path + ": " + e.what());
    } catch (const Error& e) {
        throw CommandError(kReporting, "malformed report " + path + ": " + e.what());
    }
    return r;
}

}  // namespace

// -- argument (de)serialization -------------------------------------------

void to_json(json& j, const PrepareArgs& a) {
    j = {{"three_month", a.three_month},
         {"ten_year", a.ten_year},
         {"cpi", a.cpi},
         {"three_month_kind", a.three_month_kind},
         {"ten_year_kind", a.ten_year_kind},
         {"cpi_kind", a.cpi_kind},
         {"date_column", a.date_column},
         {"value_column", a.value_column},
         {"long_inflation_window", a.long_inflation_window},
         {"min_overlap_years", a.min_overlap_years}};
}

void from_json(const json& j, PrepareArgs& a) {
    read_if(j, "three_month", a.three_month);
    read_if(j, "ten_year", a.ten_year);
    read_if(j, "cpi", a.cpi);
    read_if(j, "three_month_kind", a.three_month_kind);
    read_if(j, "ten_year_kind", a.ten_year_kind);
    read_if(j, "cpi_kind", a.cpi_kind);
    read_if(j, "date_column", a.date_column);
    read_if(j, "value_column", a.value_column);
    read_if(j, "long_inflation_window", a.long_inflation_window);
    read_if(j, "min_overlap_years", a.min_overlap_years);
}

void to_json(json& j, const EstimateArgs& a) {
    j = {{"three_month_real", a.three_month_real},
         {"ten_year_real", a.ten_year_real},
         {"seed", a.seed},
         {"bias_correction", a.bias_correction},
         {"quantiles", a.quantiles},
         {"replicates", a.replicates},
         {"steps_per_year", a.steps_per_year},
         {"blocks", a.blocks},
         {"max_iterations", a.max_iterations},
         {"tolerance", a.tolerance},
         {"ten_year_target_std", opt(a.ten_year_target_std)}};
}

void from_json(const json& j, EstimateArgs& a) {
    read_if(j, "three_month_real", a.three_month_real);
    read_if(j, "ten_year_real", a.ten_year_real);
    read_if(j, "seed", a.seed);
    read_if(j, "bias_correction", a.bias_correction);
    read_if(j, "quantiles", a.quantiles);
    read_if(j, "replicates", a.replicates);
    read_if(j, "steps_per_year", a.steps_per_year);
    read_if(j, "blocks", a.blocks);
    read_if(j, "max_iterations", a.max_iterations);
    read_if(j, "tolerance", a.tolerance);
    read_opt(j, "ten_year_target_std", a.ten_year_target_std);
}

void to_json(json& j, const CurveArgs& a) {
    j = {{"report", a.report},
         {"r0", opt(a.r0)},
         {"r0_last", a.r0_last},
         {"points", a.points},
         {"tau_min", a.tau_min},
         {"tau_max", a.tau_max},
         {"bands", a.bands},
         {"replicates", opt(a.replicates)},
         {"seed", opt(a.seed)}};
}

void from_json(const json& j, CurveArgs& a) {
    read_if(j, "report", a.report);
    read_opt(j, "r0", a.r0);
    read_if(j, "r0_last", a.r0_last);
    read_if(j, "points", a.points);
    read_if(j, "tau_min", a.tau_min);
    read_if(j, "tau_max", a.tau_max);
    read_if(j, "bands", a.bands);
    read_opt(j, "replicates", a.replicates);
    read_opt(j, "seed", a.seed);
}

void to_json(json& j, const SimulateArgs& a) {
    j = {{"report", a.report},
         {"m", opt(a.m)},
         {"k", opt(a.k)},
         {"alpha", opt(a.alpha)},
         {"q", opt(a.q)},
         {"reps", a.reps},
         {"years", a.years},
         {"steps_per_year", a.steps_per_year},
         {"seed", a.seed},
         {"ten_year_target_std", opt(a.ten_year_target_std)},
         {"ten_year_correlation", opt(a.ten_year_correlation)},
         {"write_series", a.write_series}};
}

void from_json(const json& j, SimulateArgs& a) {
    read_if(j, "report", a.report);
    read_opt(j, "m", a.m);
    read_opt(j, "k", a.k);
    read_opt(j, "alpha", a.alpha);
    read_opt(j, "q", a.q);
    read_if(j, "reps", a.reps);
    read_if(j, "years", a.years);
    read_if(j, "steps_per_year", a.steps_per_year);
    read_if(j, "seed", a.seed);
    read_opt(j, "ten_year_target_std", a.ten_year_target_std);
    read_opt(j, "ten_year_correlation", a.ten_year_correlation);
    read_if(j, "write_series", a.write_series);
}

// -- prepare ----------------------------------------------------------------

void cmd_prepare(const PrepareArgs& args, const RunContext& ctx) {
    PreparedDataset data;
    json inputs = json::array();
    try {
        auto load = [&](const std::string& path, const std::string& kind) {
            if (path.empty()) throw Error(ErrorKind::Config, "input path missing");
            return load_csv({path, parse_series_kind(kind), args.date_column, args.value_column});
        };
        const TimeSeries n3 = load(args.three_month, args.three_month_kind);
        const TimeSeries n10 = load(args.ten_year, args.ten_year_kind);
        const TimeSeries cpi = load(args.cpi, args.cpi_kind);
        const SeriesKind cpi_kind = parse_series_kind(args.cpi_kind);
        if (cpi_kind != SeriesKind::CpiGrowthPercent && cpi_kind != SeriesKind::CpiIndexLevel) {
            throw Error(ErrorKind::Config, "CPI kind must be cpi_growth_percent or cpi_index_level");
        }
        PrepareOptions opts;
        opts.cpi_form = cpi_kind == SeriesKind::CpiIndexLevel ? CpiForm::IndexLevel : CpiForm::GrowthFraction;
        opts.long_inflation_window = args.long_inflation_window;
        opts.min_overlap_years = args.min_overlap_years;
        data = prepare_dataset(n3, n10, cpi, opts);
        for (const auto* p : {&args.three_month, &args.ten_year, &args.cpi}) inputs.push_back(input_record(*p));
    } catch (const Error& e) {
        throw CommandError(ingest_code(e), e.what(), error_payload(e, "prepare"));
    }

    for (const auto& w : data.warnings) {
        std::cerr << "warning: " << w << "\n";
    }

    OutputLog log{ctx.out_dir};
    log.put("three_month_real.csv", real_series_csv(data.three_month_real, data.nominal_3m, data.three_month_inflation));
    log.put("ten_year_real.csv", real_series_csv(data.ten_year_real, data.nominal_10y, data.ten_year_inflation));
    const TimeSeries& g = data.inflation_annual;
    log.put("inflation_annual.csv",
            csv_text("date", year_labels(g), {{"inflation", std::vector<double>(g.values().begin(), g.values().end())}}));
    json prov = data.provenance;
    prov["input_files"] = inputs;
    log.put("provenance.json", json_text(prov));
    write_manifest(log, "prepare", args, inputs);
    if (!ctx.quiet) {
        std::cout << "prepared " << data.three_month_real.base.size() << " three-month and "
                  << data.ten_year_real.base.size() << " ten-year real-rate observations in " << ctx.out_dir.string()
                  << "\n";
    }
}

// -- estimate ---------------------------------------------------------------

json report_to_json(const EstimationReport& rep, const EstimateArgs& args) {
    json j;
    j["units"] = "fraction per year";
    j["seed"] = args.seed;
    j["data"] = {{"n_three_month", rep.n_three_month},
                 {"n_ten_year", rep.n_ten_year},
                 {"n_overlap", rep.n_overlap},
                 {"three_month_range", rep.three_month_range},
                 {"ten_year_range", rep.ten_year_range},
                 {"overlap_range", rep.overlap_range},
                 {"mean_three_month", json_number(rep.raw.mean_3m)},
                 {"mean_ten_year", json_number(rep.raw.mean_10y)},
                 {"ten_year_std", json_number(rep.ten_year_std)},
                 {"last_three_month", json_number(rep.last_three_month)}};
    j["raw"] = params_json(rep.raw.params, rep.raw.q);
    j["alpha_autocorrelation"] = {{"alpha", json_number(rep.alpha_acf.alpha)},
                                  {"std_error", json_number(rep.alpha_acf.std_error)},
                                  {"lags_used", rep.alpha_acf.lags_used}};
    j["block_min_max"] = {{"blocks", rep.block_min_max.blocks.size()},
                          {"alpha", json_number(rep.block_min_max.alpha)},
                          {"m", {{"min", json_number(rep.block_min_max.m.min)}, {"max", json_number(rep.block_min_max.m.max)}}},
                          {"k", {{"min", json_number(rep.block_min_max.k.min)}, {"max", json_number(rep.block_min_max.k.max)}}}};
    if (rep.corrected) {
        j["bias_correction"] = {{"converged", rep.corrected->converged},
                                {"iterations", rep.corrected->iterations},
                                {"last_relative_change", json_number(rep.corrected->last_relative_change)},
                                {"failed_replicates", rep.corrected->failed_replicates}};
    } else {
        j["bias_correction"] = nullptr;
    }
    const BiasCorrectionConfig& b = rep.bias_config;
    j["simulation"] = {{"replicates", b.replicates},
                       {"steps_per_year", b.steps_per_year},
                       {"years", b.years},
                       {"ten_year_target_std", b.ten_year_target_std ? json_number(*b.ten_year_target_std) : json(nullptr)},
                       {"damping", json_number(b.damping)},
                       {"tolerance", json_number(b.tolerance)},
                       {"max_iterations", b.max_iterations}};
    j["params"] = params_json(rep.params, rep.q);
    j["params"]["m_star"] = json_number(rep.m_star);
    j["r_infinity"] = json_number(rep.r_infinity);
    if (rep.quantiles) {
        const ConfidenceBands& c = *rep.quantiles;
        j["quantiles"] = {{"m", band_json(c.m)},
                          {"k", band_json(c.k)},
                          {"alpha", band_json(c.alpha)},
                          {"q", band_json(c.q)},
                          {"r_infinity", band_json(c.r_infinity)},
                          {"replicates", c.replicates},
                          {"failures", c.failures}};
    } else {
        j["quantiles"] = nullptr;
    }
    return j;
}

void cmd_estimate(const EstimateArgs& args, const RunContext& ctx) {
    RealRateSeries short_rate;
    RealRateSeries long_rate;
    json inputs = json::array();
    try {
        short_rate = {load_csv({args.three_month_real, SeriesKind::AnnualFraction, "date", "real_rate"}),
                      Maturity::ThreeMonth};
        long_rate = {load_csv({args.ten_year_real, SeriesKind::AnnualFraction, "date", "real_rate"}), Maturity::TenYear};
        inputs.push_back(input_record(args.three_month_real));
        inputs.push_back(input_record(args.ten_year_real));
    } catch (const Error& e) {
        throw CommandError(ingest_code(e), e.what(), error_payload(e, "load"));
    }

    EstimationConfig cfg;
    cfg.blocks = args.blocks;
    cfg.bias_correction = args.bias_correction;
    cfg.quantiles = args.quantiles;
    cfg.bias.replicates = args.replicates;
    cfg.bias.steps_per_year = args.steps_per_year;
    cfg.bias.max_iterations = args.max_iterations;
    cfg.bias.tolerance = args.tolerance;
    cfg.bias.ten_year_target_std = args.ten_year_target_std;
    cfg.bias.threads = ctx.threads;

    EstimationReport rep;
    try {
        rep = run_estimation(short_rate, long_rate, cfg, args.seed);
    } catch (const Error& e) {
        const json payload = error_payload(e, "estimation");
        try {
            write_file(ctx.out_dir / "error.json", json_text(payload));
        } catch (const Error&) {
        }
        throw CommandError(kEstimation, e.what(), payload);
    }

    OutputLog log{ctx.out_dir};
    log.put("report.json", json_text(report_to_json(rep, args)));
    write_manifest(log, "estimate", args, inputs);
    if (!ctx.quiet) {
        std::cout << "m=" << format_number(rep.params.m) << " k=" << format_number(rep.params.k)
                  << " alpha=" << format_number(rep.params.alpha) << " q=" << format_number(rep.q)
                  << " r_inf=" << format_number(rep.r_infinity) << "\n";
    }
}

// -- curve ------------------------------------------------------------------

void cmd_curve(const CurveArgs& args, const RunContext& ctx) {
    const LoadedReport rep = load_report(args.report);
    json inputs = json::array({input_record(args.report)});
    if (args.points < 2 || !(args.tau_min > 0.0) || !(args.tau_max > args.tau_min)) {
        throw CommandError(kUsage, "curve grid needs points >= 2 and 0 < tau_min < tau_max");
    }
    const double r0 = args.r0 ? *args.r0 : (args.r0_last ? rep.last_three_month : rep.params.m);
    const std::vector<double> grid = log_spaced_grid(args.tau_min, args.tau_max, args.points);

    DiscountCurve curve;
    try {
        if (args.bands) {
            BiasCorrectionConfig bias = rep.bias;
            bias.threads = ctx.threads;
            curve = discount_curve_with_bands(rep.params, rep.q, r0, grid, bias,
                                              args.replicates.value_or(rep.bias.replicates), args.seed.value_or(rep.seed));
        } else {
            curve.taus = grid;
            for (double tau : grid) {
                curve.log_discounts.push_back(log_discount(rep.params, rep.q, r0, tau));
                curve.rates.push_back(annualized_rate(rep.params, rep.q, r0, tau));
            }
            curve.band_5 = curve.rates;
            curve.band_95 = curve.rates;
        }
    } catch (const Error& e) {
        throw CommandError(kEstimation, e.what(), error_payload(e, "curve"));
    }

    OutputLog log{ctx.out_dir};
    log.put("curve.csv", csv_text("", {},
                                  {{"tau", curve.taus},
                                   {"rate", curve.rates},
                                   {"band_5", curve.band_5},
                                   {"band_95", curve.band_95}}));
    log.put("curve.svg", curve_svg(curve.taus, curve.rates, curve.band_5, curve.band_95,
                                   "Discount rate by maturity, r_inf = " + format_number(100.0 * long_run_rate(rep.params, rep.q)) + "%"));
    write_manifest(log, "curve", args, inputs);
    if (!ctx.quiet) {
        std::cout << "rate(" << format_number(curve.taus.back()) << ")=" << format_number(curve.rates.back())
                  << " r_inf=" << format_number(long_run_rate(rep.params, rep.q)) << "\n";
    }
}

// -- simulate ---------------------------------------------------------------

void cmd_simulate(const SimulateArgs& args, const RunContext& ctx) {
    OuParams params;
    double q = 0.0;
    std::optional<double> report_std;
    json inputs = json::array();
    if (!args.report.empty()) {
        const LoadedReport rep = load_report(args.report);
        params = rep.params;
        q = rep.q;
        report_std = rep.bias.ten_year_target_std;
        inputs.push_back(input_record(args.report));
    } else if (!args.m || !args.k || !args.alpha) {
        throw CommandError(kUsage, "simulate needs --report or all of --m, --k and --alpha");
    }
    if (args.m) params.m = *args.m;
    if (args.k) params.k = *args.k;
    if (args.alpha) params.alpha = *args.alpha;
    if (args.q) q = *args.q;

    SurrogateConfig cfg;
    cfg.years = args.years;
    cfg.steps_per_year = args.steps_per_year;
    cfg.threads = ctx.threads;
    ModelStatistics stats;
    try {
        params.validate();
        if (args.ten_year_target_std && args.ten_year_correlation) {
            throw Error(ErrorKind::Config, "give at most one of --ten-year-std and --ten-year-correlation");
        }
        cfg.ten_year_target_std = report_std;
        if (args.ten_year_target_std) cfg.ten_year_target_std = *args.ten_year_target_std;
        if (args.ten_year_correlation) cfg.ten_year_target_std = ten_year_std_for_correlation(params, q, *args.ten_year_correlation);
        cfg.validate();
        if (args.reps < 1) throw Error(ErrorKind::Config, "--reps must be at least 1");
        stats = model_statistics(params, q, cfg, args.reps, args.seed);
    } catch (const Error& e) {
        throw CommandError(kUsage, e.what(), error_payload(e, "simulate"));
    }

    json j;
    j["units"] = "fraction per year";
    j["params"] = params_json(params, q);
    j["seed"] = args.seed;
    j["replicates"] = stats.replicates;
    j["years"] = cfg.years;
    j["steps_per_year"] = cfg.steps_per_year;
    j["ten_year_target_std"] = cfg.ten_year_target_std ? json_number(*cfg.ten_year_target_std) : json(nullptr);
    j["neg_frac_3m"] = json_number(stats.neg_frac_3m);
    j["neg_frac_10y"] = json_number(stats.neg_frac_10y);
    j["inversion_frac"] = json_number(stats.inversion_frac);
    j["corr_3m_10y"] = json_number(stats.corr_3m_10y);
    j["std_3m"] = json_number(stats.std_3m);
    j["std_10y"] = json_number(stats.std_10y);
    j["noise_skipped"] = stats.noise_skipped;
    json edges = json::array();
    for (double e : stats.spread_histogram.edges) edges.push_back(json_number(e));
    j["spread_histogram"] = {{"edges", edges}, {"counts", stats.spread_histogram.counts}};

    OutputLog log{ctx.out_dir};
    log.put("statistics.json", json_text(j));
    const std::size_t n_series = std::min(args.write_series, args.reps);
    for (std::size_t i = 0; i < n_series; ++i) {
        // Same streams as model_statistics uses for replicate i.
        Rng path_rng = make_rng(args.seed, Stream::Path, i);
        Rng noise_rng = make_rng(args.seed, Stream::Noise, i);
        const SurrogatePair pair = simulate_surrogate_pair(params, q, cfg, path_rng, noise_rng);
        std::vector<std::string> years;
        std::vector<double> t;
        for (std::size_t y = 0; y < pair.three_month.size(); ++y) years.push_back(std::to_string(y));
        char name[64];
        std::snprintf(name, sizeof name, "series/replicate_%04zu.csv", i);
        log.put(name, csv_text("year", years, {{"three_month", pair.three_month}, {"ten_year", pair.ten_year}}));
    }
    write_manifest(log, "simulate", args, inputs);
    if (!ctx.quiet) {
        std::cout << "neg_3m=" << format_number(stats.neg_frac_3m) << " neg_10y=" << format_number(stats.neg_frac_10y)
                  << " inverted=" << format_number(stats.inversion_frac) << " corr=" << format_number(stats.corr_3m_10y)
                  << "\n";
    }
}

// -- replay -----------------------------------------------------------------

void cmd_replay(const fs::path& manifest, const RunContext& ctx) {
    json m;
    try {
        m = json::parse(read_file(manifest));
    } catch (const std::exception& e) {
        throw CommandError(kUsage, "cannot read manifest " + manifest.string() + ": " + e.what());
    }
    try {
        for (const auto& in : m.at("inputs")) {
            const std::string path = in.at("path").get<std::string>();
            std::string digest;
            try {
                digest = file_sha256(path);
            } catch (const Error& e) {
                throw CommandError(kIngest, e.what());
            }
            if (digest != in.at("sha256").get<std::string>()) {
                throw CommandError(kIngest, "input " + path + " changed since the manifest was written");
            }
        }
        const std::string command = m.at("command").get<std::string>();
        const json& a = m.at("arguments");
        if (command == "prepare") {
            cmd_prepare(a.get<PrepareArgs>(), ctx);
        } else if (command == "estimate") {
            cmd_estimate(a.get<EstimateArgs>(), ctx);
        } else if (command == "curve") {
            cmd_curve(a.get<CurveArgs>(), ctx);
        } else if (command == "simulate") {
            cmd_simulate(a.get<SimulateArgs>(), ctx);
        } else {
            throw CommandError(kUsage, "unknown command '" + command + "' in manifest");
        }
    } catch (const json::exception& e) {
        throw CommandError(kUsage, "malformed manifest " + manifest.string() + ": " + e.what());
    }
}

}  // namespace ltdr::cli
