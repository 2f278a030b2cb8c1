// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltdr/oumodel.hpp"
#include "ltdr/simulation.hpp"
#include "ltdr/timeseries.hpp"

namespace ltdr {

/// Exact-discretization maximum likelihood for an OU process sampled every
/// `dt` years. The sampled process is AR(1):
///   r[t+dt] = m + (r[t] - m) phi + eps,  phi = e^{-alpha dt},
///   eps ~ Normal(0, k^2 (1 - phi^2) / (2 alpha)).
/// Throws DegenerateVariance for a constant series and NonMeanReverting when
/// the fitted phi falls outside (0, 1).
OuParams mle_ou_annual(std::span<const double> values, double dt = 1.0);
OuParams mle_ou_annual(const RealRateSeries& series, double dt = 1.0);

/// Same likelihood with alpha held fixed; estimates m and k only.
OuParams mle_ou_fixed_alpha(std::span<const double> values, double alpha, double dt = 1.0);

struct AlphaFit {
    double alpha = 0.0;
    double std_error = 0.0;  ///< least-squares standard error of alpha
    int lags_used = 0;
};

/// Fits K(lag)/K(0) = e^{-alpha lag} to the sample autocorrelation at lags
/// 1..max_lag by least squares on the log-autocorrelation, using only the
/// leading run of positive correlations.
AlphaFit fit_alpha_autocorrelation(std::span<const double> values, int max_lag = 10);
AlphaFit fit_alpha_autocorrelation(const RealRateSeries& series, int max_lag = 10);

/// k = sigma * sqrt(2 alpha).
double k_from_sigma(double sigma, double alpha);

struct MinMax {
    double min = 0.0;
    double max = 0.0;
};

struct BlockMinMax {
    MinMax m;
    MinMax k;
    double alpha = 0.0;  ///< full-sample value every block was fitted with
    std::vector<OuParams> blocks;
};

/// Splits the series into n_blocks contiguous blocks (remainder goes to the
/// last one) and estimates m and k per block with alpha fixed at the
/// full-sample MLE value.
BlockMinMax block_minmax(std::span<const double> values, int n_blocks, double dt = 1.0);
BlockMinMax block_minmax(const RealRateSeries& series, int n_blocks, double dt = 1.0);

/// Market price of risk from the average 10-year yield. Takes r = m =
/// mean_3m and solves mean_10y = -ln D(tau_long)/tau_long for m*, which
/// enters the discount function linearly; then q = (m* - m) alpha / k.
double estimate_q(double mean_3m, double mean_10y, const OuParams& params, double tau_long = 10.0);

/// Parameters as estimated directly from annually sampled 3-month and
/// 10-year real-rate series (the short rate treated as instantaneous).
struct RawEstimate {
    OuParams params;
    double q = 0.0;
    double mean_3m = 0.0;
    double mean_10y = 0.0;
};

RawEstimate estimate_raw(std::span<const double> three_month, std::span<const double> ten_year, double dt = 1.0);

struct BiasCorrectionConfig {
    std::size_t replicates = 1000;
    int steps_per_year = 252;
    int years = 0;  ///< simulated series length; 0 means "match the data"
    double damping = 0.5;
    double tolerance = 1e-3;
    int max_iterations = 20;
    std::optional<double> ten_year_target_std;
    unsigned threads = 0;

    void validate() const;
    SurrogateConfig surrogate() const;
};

struct BiasCorrectionResult {
    OuParams params;
    double q = 0.0;
    bool converged = false;
    int iterations = 0;
    double last_relative_change = 0.0;
    std::size_t failed_replicates = 0;  ///< in the final iteration
};

/// Damped fixed-point search for instantaneous parameters whose simulated
/// 3-month surrogate estimates average to `target`. Replicate streams are
/// reused across iterations, so each iteration evaluates the same smooth map.
/// `start` defaults to the target itself.
BiasCorrectionResult bias_correct(const RawEstimate& target, const BiasCorrectionConfig& cfg, std::uint64_t seed,
                                  std::optional<RawEstimate> start = std::nullopt);

struct Band {
    double lo = 0.0;  ///< 5% quantile
    double hi = 0.0;  ///< 95% quantile
};

/// Empirical quantile with linear interpolation between order statistics.
double empirical_quantile(std::vector<double> values, double p);
Band quantile_band(const std::vector<double>& values);

struct ReplicateEstimate {
    OuParams params;
    double q = 0.0;
    double r_infinity = 0.0;
};

struct ReplicateSet {
    std::vector<ReplicateEstimate> estimates;  ///< successful replicates, in index order
    std::size_t failures = 0;
    /// Ensemble average of the raw re-estimates.
    OuParams raw_mean;
    double raw_mean_q = 0.0;
};

/// Simulates `cfg.replicates` datasets from (params, q), re-runs the raw
/// estimation on each, and maps every raw estimate through the linearized
/// inverse of the bias map at (params, q), so the replicates follow the
/// sampling distribution of the bias-corrected estimator. The Jacobian comes
/// from four extra ensembles on the same streams. Replicates mapped to k <= 0
/// or alpha <= 0 count as failures. Throws TooManyFailures above 20% failed
/// simulations, IllConditioned if the bias map is singular.
ReplicateSet confidence_replicates(const OuParams& params, double q, const BiasCorrectionConfig& cfg,
                                   std::uint64_t seed);

struct ConfidenceBands {
    Band m;
    Band k;
    Band alpha;
    Band q;
    Band r_infinity;
    std::size_t replicates = 0;
    std::size_t failures = 0;
};

ConfidenceBands confidence_quantiles(const OuParams& params, double q, const BiasCorrectionConfig& cfg,
                                     std::uint64_t seed);
ConfidenceBands summarize(const ReplicateSet& set);

struct EstimationConfig {
    int blocks = 4;
    int acf_max_lag = 10;
    double tau_long = 10.0;
    bool bias_correction = true;
    bool quantiles = true;
    BiasCorrectionConfig bias;
};

struct EstimationReport {
    RawEstimate raw;
    BlockMinMax block_min_max;
    AlphaFit alpha_acf;
    std::optional<BiasCorrectionResult> corrected;
    OuParams params;  ///< final instantaneous parameters (raw when not corrected)
    double q = 0.0;
    double m_star = 0.0;
    double r_infinity = 0.0;
    std::optional<ConfidenceBands> quantiles;
    BiasCorrectionConfig bias_config;  ///< effective settings with the data-dependent fields filled in

    // diagnostics
    std::size_t n_three_month = 0;
    std::size_t n_ten_year = 0;
    std::size_t n_overlap = 0;
    std::string three_month_range;
    std::string ten_year_range;
    std::string overlap_range;
    double ten_year_std = 0.0;
    double last_three_month = 0.0;
};

/// Full pipeline on prepared annual real-rate series: MLE, autocorrelation
/// cross-check, block min/max, q calibration, bias correction, quantiles and
/// the long-run rate.
EstimationReport run_estimation(const RealRateSeries& three_month, const RealRateSeries& ten_year,
                                const EstimationConfig& cfg, std::uint64_t seed);

}  // namespace ltdr
