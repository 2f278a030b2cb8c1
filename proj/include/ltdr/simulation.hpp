// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ltdr/oumodel.hpp"
#include "ltdr/parallel.hpp"
#include "ltdr/ratecore.hpp"
#include "ltdr/timeseries.hpp"

namespace ltdr {

struct SimConfig {
    int steps_per_year = 252;
    int years = 100;
    std::uint64_t seed = 1;
    /// Starting rate; a stationary draw when empty.
    std::optional<double> initial_rate;
    int start_year = 1900;  ///< calendar label of the first annual sample

    void validate() const;
};

/// Instantaneous-rate path on a uniform grid of `steps_per_year` steps per
/// year. values.size() == years * steps_per_year + 1; values[0] is the start.
struct SimulatedPath {
    int steps_per_year = 252;
    int start_year = 1900;
    std::vector<double> values;

    double dt() const { return 1.0 / steps_per_year; }
    int years() const { return static_cast<int>((values.size() - 1) / static_cast<std::size_t>(steps_per_year)); }
    /// Rates at t = 0, 1, ..., years - 1.
    std::vector<double> annual_samples() const;
};

/// One exact transition of the OU process over dt driven by a standard
/// normal draw z.
class ExactStepper {
public:
    ExactStepper(double mean, double k, double alpha, double dt);
    double operator()(double r, double z) const { return mean_ + (r - mean_) * decay_ + sd_ * z; }

private:
    double mean_;
    double decay_;
    double sd_;
};

SimulatedPath simulate_ou_path(const OuParams& params, const SimConfig& cfg);
SimulatedPath simulate_ou_path(const OuParams& params, int steps_per_year, int years,
                               std::optional<double> initial_rate, Rng& rng);

/// Model yields -ln D(tau)/tau are affine in the current rate:
/// y = slope * r + intercept.
struct YieldMap {
    double slope = 1.0;
    double intercept = 0.0;

    static YieldMap make(const OuParams& params, double q, double tau);
    double operator()(double r) const { return slope * r + intercept; }
};

/// Yield series of maturity tau sampled at each whole year of the path, with
/// the path value at that date as the initial condition.
TimeSeries surrogate_yield_series(const SimulatedPath& path, const OuParams& params, double q, double tau);

/// Adds iid Normal(0, target_std^2 - s^2) noise, s being the sample standard
/// deviation, so that the result has standard deviation close to target_std.
TimeSeries add_matching_noise(const TimeSeries& series, double target_std, std::uint64_t seed);
std::vector<double> add_matching_noise(std::span<const double> values, double target_std, Rng& rng);

struct McEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo average of exp(-integral r dt) under the risk-adjusted drift,
/// with trapezoidal accumulation of the integral.
McEstimate mc_discount(const OuParams& params, double q, double r0, double t, std::size_t n_paths,
                       std::uint64_t seed, int steps_per_year = 252, unsigned threads = 0);

/// Settings shared by every procedure that synthesizes annual 3-month and
/// 10-year series from simulated instantaneous paths.
struct SurrogateConfig {
    int years = 100;
    int steps_per_year = 252;
    double short_maturity = 0.25;
    double long_maturity = 10.0;
    /// Standard deviation the 10-year series is inflated to; no noise when empty.
    std::optional<double> ten_year_target_std;
    unsigned threads = 0;

    void validate() const;
};

struct SurrogatePair {
    std::vector<double> three_month;
    std::vector<double> ten_year;
    bool noise_applied = false;
};

/// Simulates one stationary path under the physical drift and converts it to
/// annual 3-month and 10-year yield series (10-year noise-matched when
/// configured). `path_rng` drives the path, `noise_rng` the added noise.
SurrogatePair simulate_surrogate_pair(const OuParams& params, double q, const SurrogateConfig& cfg, Rng& path_rng,
                                      Rng& noise_rng);

struct ModelStatistics {
    double neg_frac_3m = 0.0;
    double neg_frac_10y = 0.0;
    double inversion_frac = 0.0;
    double corr_3m_10y = 0.0;
    double std_3m = 0.0;
    double std_10y = 0.0;
    Histogram spread_histogram;  ///< counts summed over replicates
    std::size_t replicates = 0;
    std::size_t noise_skipped = 0;  ///< replicates whose 10y std already exceeded the target
};

ModelStatistics model_statistics(const OuParams& params, double q, const SurrogateConfig& cfg, std::size_t n_reps,
                                 std::uint64_t seed, const HistogramSpec& bins = {});

/// Stationary model moments of the annual surrogate yields.
struct YieldMoments {
    double mean_3m = 0.0;
    double std_3m = 0.0;
    double mean_10y = 0.0;
    double std_10y = 0.0;       ///< before any added noise
    double cov_3m_10y = 0.0;
};

YieldMoments stationary_yield_moments(const OuParams& params, double q, double short_maturity = 0.25,
                                      double long_maturity = 10.0);

/// Target 10-year standard deviation at which the noise-matched surrogate
/// series reach a given stationary 3m/10y correlation.
double ten_year_std_for_correlation(const OuParams& params, double q, double correlation);

struct DiscountCurve {
    std::vector<double> taus;
    std::vector<double> log_discounts;
    std::vector<double> rates;
    std::vector<double> band_5;
    std::vector<double> band_95;
};

struct BiasCorrectionConfig;

/// Central curve from the point estimates plus pointwise 5%/95% rate bands
/// from the parameter sets re-estimated on simulated data.
DiscountCurve discount_curve_with_bands(const OuParams& params, double q, double r0, std::span<const double> tau_grid,
                                        const BiasCorrectionConfig& cfg, std::size_t n_reps, std::uint64_t seed);

/// Log-spaced maturities from lo to hi inclusive.
std::vector<double> log_spaced_grid(double lo, double hi, std::size_t points);

}  // namespace ltdr
