// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "ltdr/error.hpp"

namespace {

using ltdr::cli::CommandError;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Flat "key = value" file turned into --key value tokens for the chosen
// subcommand. Flags take true/false.
std::vector<std::string> config_tokens(const std::string& path, CLI::App& sub) {
    std::ifstream in(path);
    if (!in) throw CommandError(ltdr::cli::kUsage, "cannot open config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw CommandError(ltdr::cli::kUsage, path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        for (auto& c : key) {
            if (c == '_') c = '-';
        }
        const CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw CommandError(ltdr::cli::kUsage,
                               path + ":" + std::to_string(line_no) + ": unknown key '" + key + "' for " + sub.get_name());
        }
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes") tokens.push_back("--" + key);
            else if (value != "false" && value != "0" && value != "no") {
                throw CommandError(ltdr::cli::kUsage, path + ":" + std::to_string(line_no) + ": '" + key +
                                                          "' takes true or false");
            }
        } else {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace ltdr::cli;

    CLI::App app{"Long-term real discount rates from a risk-adjusted Ornstein-Uhlenbeck model"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", std::string(LTDR_VERSION));

    RunContext ctx;
    std::string out_dir;
    std::string config_file;
    auto common = [&](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("-o,--out", out_dir, "Output directory")->envname("LTDR_OUTPUT_DIR");
        sub->add_option("--threads", ctx.threads, "Worker threads (0 = all cores); never changes results");
        sub->add_flag("--quiet", ctx.quiet, "No summary on stdout");
        sub->add_option("--config", config_file, "Flat key = value file with option defaults");
    };

    PrepareArgs prep;
    auto* p = app.add_subcommand("prepare", "Build real-rate series from nominal yields and CPI");
    common(p);
    p->add_option("--three-month", prep.three_month, "Nominal 3-month rate CSV")->required();
    p->add_option("--ten-year", prep.ten_year, "Nominal 10-year rate CSV")->required();
    p->add_option("--cpi", prep.cpi, "CPI CSV (growth percent or index level)")->required();
    const auto kinds = CLI::IsMember({"annual_rate_percent", "monthly_rate_percent"});
    p->add_option("--three-month-kind", prep.three_month_kind)->check(kinds)->capture_default_str();
    p->add_option("--ten-year-kind", prep.ten_year_kind)->check(kinds)->capture_default_str();
    p->add_option("--cpi-kind", prep.cpi_kind)
        ->check(CLI::IsMember({"cpi_growth_percent", "cpi_index_level"}))
        ->capture_default_str();
    p->add_option("--date-column", prep.date_column)->capture_default_str();
    p->add_option("--value-column", prep.value_column)->capture_default_str();
    p->add_option("--long-window", prep.long_inflation_window, "Years of forward inflation netted from the 10-year rate")
        ->capture_default_str();
    p->add_option("--min-overlap", prep.min_overlap_years)->capture_default_str();

    EstimateArgs est;
    std::string data_dir;
    bool no_bias = false;
    bool no_quantiles = false;
    double target_std = 0.0;
    auto* e = app.add_subcommand("estimate", "Fit the model to prepared real-rate series");
    common(e);
    e->add_option("--data", data_dir, "Directory written by prepare");
    e->add_option("--three-month-real", est.three_month_real, "Prepared 3-month real-rate CSV");
    e->add_option("--ten-year-real", est.ten_year_real, "Prepared 10-year real-rate CSV");
    e->add_option("--seed", est.seed)->capture_default_str();
    e->add_flag("--no-bias-correction", no_bias, "Report raw estimates only");
    e->add_flag("--no-quantiles", no_quantiles, "Skip the 5%/95% parameter bands");
    e->add_option("--replicates", est.replicates)->capture_default_str();
    e->add_option("--steps-per-year", est.steps_per_year)->capture_default_str();
    e->add_option("--blocks", est.blocks)->capture_default_str();
    e->add_option("--max-iterations", est.max_iterations)->capture_default_str();
    e->add_option("--tolerance", est.tolerance)->capture_default_str();
    auto* e_std = e->add_option("--ten-year-std", target_std, "Noise target for simulated 10-year series");

    CurveArgs cur;
    double r0 = 0.0;
    std::size_t curve_reps = 0;
    std::uint64_t curve_seed = 0;
    bool no_bands = false;
    auto* c = app.add_subcommand("curve", "Discount-rate curve with bands from an estimation report");
    common(c);
    c->add_option("--report", cur.report, "report.json written by estimate")->required();
    auto* c_r0 = c->add_option("--r0", r0, "Current short rate (default: the fitted mean)");
    c->add_flag("--r0-last", cur.r0_last, "Start from the last observed 3-month real rate");
    c->add_option("--points", cur.points)->capture_default_str();
    c->add_option("--tau-min", cur.tau_min)->capture_default_str();
    c->add_option("--tau-max", cur.tau_max)->capture_default_str();
    c->add_flag("--no-bands", no_bands);
    auto* c_reps = c->add_option("--replicates", curve_reps, "Band replicates (default: as in the report)");
    auto* c_seed = c->add_option("--seed", curve_seed, "Band seed (default: the report's seed)");

    SimulateArgs sim;
    double sm = 0, sk = 0, sa = 0, sq = 0, sstd = 0, scorr = 0;
    auto* s = app.add_subcommand("simulate", "Model statistics of simulated 3-month and 10-year series");
    common(s);
    s->add_option("--report", sim.report, "Take parameters from report.json");
    auto* s_m = s->add_option("--m", sm);
    auto* s_k = s->add_option("--k", sk);
    auto* s_a = s->add_option("--alpha", sa);
    auto* s_q = s->add_option("--q", sq);
    s->add_option("--reps", sim.reps)->capture_default_str();
    s->add_option("--years", sim.years)->capture_default_str();
    s->add_option("--steps-per-year", sim.steps_per_year)->capture_default_str();
    s->add_option("--seed", sim.seed)->capture_default_str();
    auto* s_std = s->add_option("--ten-year-std", sstd, "Standard deviation the 10-year series is noised up to (default: the report's)");
    auto* s_corr = s->add_option("--ten-year-correlation", scorr, "Choose the noise to reach this 3m/10y correlation");
    s->add_option("--write-series", sim.write_series, "Write the first N replicate series as CSV")
        ->capture_default_str();

    std::string manifest;
    auto* r = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    common(r);
    r->add_option("manifest", manifest, "manifest.json")->required();

    // Splice config-file tokens in ahead of the explicit arguments so that
    // the command line wins.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        std::string cfg_path;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) cfg_path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) cfg_path = args[i].substr(9);
        }
        if (!cfg_path.empty() && !args.empty()) {
            CLI::App* sub = nullptr;
            std::size_t at = 0;
            for (; at < args.size(); ++at) {
                for (CLI::App* cand : {p, e, c, s, r}) {
                    if (args[at] == cand->get_name()) sub = cand;
                }
                if (sub) break;
            }
            if (sub) {
                const auto extra = config_tokens(cfg_path, *sub);
                args.insert(args.begin() + static_cast<std::ptrdiff_t>(at) + 1, extra.begin(), extra.end());
            }
        }
    } catch (const CommandError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.code();
    }

    std::reverse(args.begin(), args.end());  // CLI11 takes the vector back to front
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForVersion& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kUsage;
    }

    if (out_dir.empty()) out_dir = "ltdr-out";
    ctx.out_dir = out_dir;

    try {
        if (p->parsed()) {
            cmd_prepare(prep, ctx);
        } else if (e->parsed()) {
            if (!data_dir.empty()) {
                if (est.three_month_real.empty()) est.three_month_real = data_dir + "/three_month_real.csv";
                if (est.ten_year_real.empty()) est.ten_year_real = data_dir + "/ten_year_real.csv";
            }
            if (est.three_month_real.empty() || est.ten_year_real.empty()) {
                throw CommandError(kUsage, "estimate needs --data or both --three-month-real and --ten-year-real");
            }
            est.bias_correction = !no_bias;
            est.quantiles = !no_quantiles;
            if (e_std->count() > 0) est.ten_year_target_std = target_std;
            cmd_estimate(est, ctx);
        } else if (c->parsed()) {
            if (c_r0->count() > 0) cur.r0 = r0;
            if (c_reps->count() > 0) cur.replicates = curve_reps;
            if (c_seed->count() > 0) cur.seed = curve_seed;
            cur.bands = !no_bands;
            cmd_curve(cur, ctx);
        } else if (s->parsed()) {
            if (s_m->count() > 0) sim.m = sm;
            if (s_k->count() > 0) sim.k = sk;
            if (s_a->count() > 0) sim.alpha = sa;
            if (s_q->count() > 0) sim.q = sq;
            if (s_std->count() > 0) sim.ten_year_target_std = sstd;
            if (s_corr->count() > 0) sim.ten_year_correlation = scorr;
            cmd_simulate(sim, ctx);
        } else if (r->parsed()) {
            cmd_replay(manifest, ctx);
        }
    } catch (const CommandError& err) {
        std::cerr << "error: " << err.what() << "\n";
        if (!err.payload().is_null()) std::cerr << err.payload().dump() << "\n";
        return err.code();
    } catch (const ltdr::Error& err) {
        // Anything escaping a command happened while writing results.
        std::cerr << "error: " << err.what() << "\n";
        return kReporting;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kReporting;
    }
    return kOk;
}
