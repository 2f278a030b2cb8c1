// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ltdr/estimation.hpp"

namespace ltdr::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIngest = 2, kEstimation = 3, kReporting = 4 };

/// Raised by the commands; carries the process exit code and a diagnostic
/// payload for the error file.
class CommandError : public std::runtime_error {
public:
    CommandError(int code, const std::string& message, nlohmann::json payload = nullptr)
        : std::runtime_error(message), code_(code), payload_(std::move(payload)) {}
    int code() const noexcept { return code_; }
    const nlohmann::json& payload() const noexcept { return payload_; }

private:
    int code_;
    nlohmann::json payload_;
};

/// Options that never change the bytes written.
struct RunContext {
    std::filesystem::path out_dir;
    unsigned threads = 0;
    bool quiet = false;
};

struct PrepareArgs {
    std::string three_month;
    std::string ten_year;
    std::string cpi;
    std::string three_month_kind = "annual_rate_percent";
    std::string ten_year_kind = "annual_rate_percent";
    std::string cpi_kind = "cpi_growth_percent";
    std::string date_column = "date";
    std::string value_column = "value";
    int long_inflation_window = 10;
    int min_overlap_years = 30;
};

struct EstimateArgs {
    std::string three_month_real;
    std::string ten_year_real;
    std::uint64_t seed = 1;
    bool bias_correction = true;
    bool quantiles = true;
    std::size_t replicates = 1000;
    int steps_per_year = 252;
    int blocks = 4;
    int max_iterations = 20;
    double tolerance = 1e-3;
    std::optional<double> ten_year_target_std;
};

struct CurveArgs {
    std::string report;
    std::optional<double> r0;
    bool r0_last = false;
    std::size_t points = 121;
    double tau_min = 0.25;
    double tau_max = 1000.0;
    bool bands = true;
    std::optional<std::size_t> replicates;  ///< defaults to the report's setting
    std::optional<std::uint64_t> seed;      ///< defaults to the report's seed
};

struct SimulateArgs {
    std::string report;
    std::optional<double> m;
    std::optional<double> k;
    std::optional<double> alpha;
    std::optional<double> q;
    std::size_t reps = 1000;
    int years = 100;
    int steps_per_year = 252;
    std::uint64_t seed = 1;
    std::optional<double> ten_year_target_std;
    std::optional<double> ten_year_correlation;
    std::size_t write_series = 0;
};

void to_json(nlohmann::json& j, const PrepareArgs& a);
void from_json(const nlohmann::json& j, PrepareArgs& a);
void to_json(nlohmann::json& j, const EstimateArgs& a);
void from_json(const nlohmann::json& j, EstimateArgs& a);
void to_json(nlohmann::json& j, const CurveArgs& a);
void from_json(const nlohmann::json& j, CurveArgs& a);
void to_json(nlohmann::json& j, const SimulateArgs& a);
void from_json(const nlohmann::json& j, SimulateArgs& a);

void cmd_prepare(const PrepareArgs& args, const RunContext& ctx);
void cmd_estimate(const EstimateArgs& args, const RunContext& ctx);
void cmd_curve(const CurveArgs& args, const RunContext& ctx);
void cmd_simulate(const SimulateArgs& args, const RunContext& ctx);

/// Re-runs the command recorded in a manifest into ctx.out_dir.
void cmd_replay(const std::filesystem::path& manifest, const RunContext& ctx);

nlohmann::json report_to_json(const EstimationReport& rep, const EstimateArgs& args);

}  // namespace ltdr::cli
