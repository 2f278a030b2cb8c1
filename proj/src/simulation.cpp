// SPDX-License-Identifier: Apache-2.0
#include "ltdr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ltdr/error.hpp"
#include "ltdr/estimation.hpp"

namespace ltdr {

void SimConfig::validate() const {
    if (steps_per_year < 1) {
        throw Error(ErrorKind::Config, "steps_per_year must be >= 1");
    }
    if (years < 1) {
        throw Error(ErrorKind::Config, "years must be >= 1");
    }
}

void SurrogateConfig::validate() const {
    if (steps_per_year < 1) {
        throw Error(ErrorKind::Config, "steps_per_year must be >= 1");
    }
    if (years < 3) {
        throw Error(ErrorKind::Config, "surrogate series need at least 3 years");
    }
    if (!(short_maturity > 0.0) || !(long_maturity > 0.0)) {
        throw Error(ErrorKind::Config, "maturities must be positive");
    }
    if (ten_year_target_std && !(*ten_year_target_std >= 0.0)) {
        throw Error(ErrorKind::Config, "ten-year target std must be non-negative");
    }
}

std::vector<double> SimulatedPath::annual_samples() const {
    const auto n = static_cast<std::size_t>(years());
    std::vector<double> out(n);
    for (std::size_t y = 0; y < n; ++y) {
        out[y] = values[y * static_cast<std::size_t>(steps_per_year)];
    }
    return out;
}

ExactStepper::ExactStepper(double mean, double k, double alpha, double dt)
    : mean_(mean),
      decay_(std::exp(-alpha * dt)),
      sd_(k * std::sqrt(-std::expm1(-2.0 * alpha * dt) / (2.0 * alpha))) {}

SimulatedPath simulate_ou_path(const OuParams& params, int steps_per_year, int years,
                               std::optional<double> initial_rate, Rng& rng) {
    params.validate();
    std::normal_distribution<double> normal;
    const ExactStepper step(params.m, params.k, params.alpha, 1.0 / steps_per_year);
    SimulatedPath path;
    path.steps_per_year = steps_per_year;
    const std::size_t n = static_cast<std::size_t>(years) * static_cast<std::size_t>(steps_per_year);
    path.values.resize(n + 1);
    path.values[0] = initial_rate ? *initial_rate : params.m + params.sigma() * normal(rng);
    for (std::size_t i = 1; i <= n; ++i) {
        path.values[i] = step(path.values[i - 1], normal(rng));
    }
    return path;
}

SimulatedPath simulate_ou_path(const OuParams& params, const SimConfig& cfg) {
    cfg.validate();
    Rng rng = make_rng(cfg.seed, Stream::Path, 0);
    SimulatedPath path = simulate_ou_path(params, cfg.steps_per_year, cfg.years, cfg.initial_rate, rng);
    path.start_year = cfg.start_year;
    return path;
}

YieldMap YieldMap::make(const OuParams& params, double q, double tau) {
    if (!(tau > 0.0)) {
        throw Error(ErrorKind::Domain, "yield maturity must be positive");
    }
    // ln D is affine in r; read the slope and intercept off two evaluations.
    const double at_zero = annualized_rate(params, q, 0.0, tau);
    const double slope = -std::expm1(-params.alpha * tau) / (params.alpha * tau);
    return {slope, at_zero};
}

TimeSeries surrogate_yield_series(const SimulatedPath& path, const OuParams& params, double q, double tau) {
    const YieldMap yield = YieldMap::make(params, q, tau);
    std::vector<double> samples = path.annual_samples();
    if (samples.empty()) {
        throw Error(ErrorKind::EmptyInput, "path shorter than one year");
    }
    for (double& v : samples) {
        v = yield(v);
    }
    return TimeSeries({path.start_year, 12}, Frequency::Annual, std::move(samples));
}

std::vector<double> add_matching_noise(std::span<const double> values, double target_std, Rng& rng) {
    const double current = sample_stddev(values);
    if (target_std < current) {
        throw Error(ErrorKind::Domain, "target std " + std::to_string(target_std) +
                                           " below current std " + std::to_string(current) +
                                           "; additive noise cannot deflate");
    }
    const double noise_sd = std::sqrt((target_std - current) * (target_std + current));
    std::vector<double> out(values.begin(), values.end());
    if (noise_sd == 0.0) {
        return out;
    }
    std::normal_distribution<double> normal(0.0, noise_sd);
    for (double& v : out) {
        v += normal(rng);
    }
    return out;
}

TimeSeries add_matching_noise(const TimeSeries& series, double target_std, std::uint64_t seed) {
    Rng rng = make_rng(seed, Stream::Noise, 0);
    return TimeSeries(series.start(), series.frequency(), add_matching_noise(series.values(), target_std, rng));
}

McEstimate mc_discount(const OuParams& params, double q, double r0, double t, std::size_t n_paths,
                       std::uint64_t seed, int steps_per_year, unsigned threads) {
    params.validate();
    if (n_paths < 100) {
        throw Error(ErrorKind::Config, "mc_discount needs at least 100 paths");
    }
    if (!(t >= 0.0)) {
        throw Error(ErrorKind::Domain, "maturity must be non-negative");
    }
    if (steps_per_year < 1) {
        throw Error(ErrorKind::Config, "steps_per_year must be >= 1");
    }
    if (t == 0.0) {
        return {1.0, 0.0};
    }
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t * steps_per_year - 1e-9)));
    const double dt = t / static_cast<double>(steps);
    const double m_star = risk_adjusted_mean(params, q).m_star;
    const ExactStepper step(m_star, params.k, params.alpha, dt);

    // Paths are grouped in fixed blocks, one RNG stream per block.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<double> sums(blocks, 0.0);
    std::vector<double> sums_sq(blocks, 0.0);
    parallel_for(blocks, threads, [&](std::size_t b) {
        Rng rng = make_rng(seed, Stream::DiscountMc, b);
        std::normal_distribution<double> normal;
        const std::size_t first = b * kBlock;
        const std::size_t last = std::min(n_paths, first + kBlock);
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t p = first; p < last; ++p) {
            double r = r0;
            double x = 0.0;
            for (std::size_t i = 0; i < steps; ++i) {
                const double next = step(r, normal(rng));
                x += 0.5 * (r + next) * dt;
                r = next;
            }
            const double d = std::exp(-x);
            s += d;
            s2 += d * d;
        }
        sums[b] = s;
        sums_sq[b] = s2;
    });
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        s += sums[b];
        s2 += sums_sq[b];
    }
    const auto n = static_cast<double>(n_paths);
    const double avg = s / n;
    const double var = std::max(0.0, (s2 - n * avg * avg) / (n - 1.0));
    return {avg, std::sqrt(var / n)};
}

SurrogatePair simulate_surrogate_pair(const OuParams& params, double q, const SurrogateConfig& cfg, Rng& path_rng,
                                      Rng& noise_rng) {
    const SimulatedPath path = simulate_ou_path(params, cfg.steps_per_year, cfg.years, std::nullopt, path_rng);
    const YieldMap short_yield = YieldMap::make(params, q, cfg.short_maturity);
    const YieldMap long_yield = YieldMap::make(params, q, cfg.long_maturity);
    const std::vector<double> rates = path.annual_samples();
    SurrogatePair out;
    out.three_month.resize(rates.size());
    out.ten_year.resize(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        out.three_month[i] = short_yield(rates[i]);
        out.ten_year[i] = long_yield(rates[i]);
    }
    if (cfg.ten_year_target_std) {
        const double target = *cfg.ten_year_target_std;
        if (params.k > 0.0 && sample_stddev(out.ten_year) <= target) {
            out.ten_year = add_matching_noise(out.ten_year, target, noise_rng);
            out.noise_applied = true;
        }
    }
    return out;
}

ModelStatistics model_statistics(const OuParams& params, double q, const SurrogateConfig& cfg, std::size_t n_reps,
                                 std::uint64_t seed, const HistogramSpec& bins) {
    params.validate();
    cfg.validate();
    if (n_reps < 1) {
        throw Error(ErrorKind::Config, "model_statistics needs at least one replicate");
    }
    struct Rep {
        double neg3 = 0.0;
        double neg10 = 0.0;
        double inv = 0.0;
        double corr = 0.0;
        double sd3 = 0.0;
        double sd10 = 0.0;
        bool noise = false;
        Histogram hist;
    };
    std::vector<Rep> reps(n_reps);
    parallel_for(n_reps, cfg.threads, [&](std::size_t i) {
        Rng path_rng = make_rng(seed, Stream::Path, i);
        Rng noise_rng = make_rng(seed, Stream::Noise, i);
        const SurrogatePair pair = simulate_surrogate_pair(params, q, cfg, path_rng, noise_rng);
        Rep& rep = reps[i];
        rep.neg3 = negative_fraction(pair.three_month);
        rep.neg10 = negative_fraction(pair.ten_year);
        const InversionStats inv = inversion_stats(pair.three_month, pair.ten_year, bins);
        rep.inv = inv.fraction_inverted;
        rep.hist = inv.spread_histogram;
        rep.sd3 = sample_stddev(pair.three_month);
        rep.sd10 = sample_stddev(pair.ten_year);
        // A noiseless k == 0 replicate is constant; its correlation is undefined.
        rep.corr = (rep.sd3 > 0.0 && rep.sd10 > 0.0) ? pearson_correlation(pair.three_month, pair.ten_year) : 0.0;
        rep.noise = pair.noise_applied;
    });

    ModelStatistics out;
    out.replicates = n_reps;
    out.spread_histogram = reps.front().hist;
    std::fill(out.spread_histogram.counts.begin(), out.spread_histogram.counts.end(), 0);
    for (const Rep& rep : reps) {
        out.neg_frac_3m += rep.neg3;
        out.neg_frac_10y += rep.neg10;
        out.inversion_frac += rep.inv;
        out.corr_3m_10y += rep.corr;
        out.std_3m += rep.sd3;
        out.std_10y += rep.sd10;
        for (std::size_t b = 0; b < rep.hist.counts.size(); ++b) {
            out.spread_histogram.counts[b] += rep.hist.counts[b];
        }
        if (cfg.ten_year_target_std && !rep.noise) {
            ++out.noise_skipped;
        }
    }
    const auto n = static_cast<double>(n_reps);
    out.neg_frac_3m /= n;
    out.neg_frac_10y /= n;
    out.inversion_frac /= n;
    out.corr_3m_10y /= n;
    out.std_3m /= n;
    out.std_10y /= n;
    return out;
}

YieldMoments stationary_yield_moments(const OuParams& params, double q, double short_maturity,
                                      double long_maturity) {
    params.validate();
    const YieldMap s = YieldMap::make(params, q, short_maturity);
    const YieldMap l = YieldMap::make(params, q, long_maturity);
    const double sigma = params.sigma();
    YieldMoments out;
    out.mean_3m = s(params.m);
    out.mean_10y = l(params.m);
    out.std_3m = s.slope * sigma;
    out.std_10y = l.slope * sigma;
    out.cov_3m_10y = s.slope * l.slope * sigma * sigma;
    return out;
}

double ten_year_std_for_correlation(const OuParams& params, double q, double correlation) {
    if (!(correlation > 0.0 && correlation <= 1.0)) {
        throw Error(ErrorKind::Domain, "target correlation must lie in (0, 1]");
    }
    const YieldMoments mom = stationary_yield_moments(params, q);
    // corr = cov / (std_3m * s)  =>  s = std_10y / corr
    return mom.std_10y / correlation;
}

std::vector<double> log_spaced_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) {
        throw Error(ErrorKind::Domain, "log grid needs 0 < lo < hi and at least two points");
    }
    std::vector<double> out(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = lo * std::exp(step * static_cast<double>(i));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

DiscountCurve discount_curve_with_bands(const OuParams& params, double q, double r0, std::span<const double> tau_grid,
                                        const BiasCorrectionConfig& cfg, std::size_t n_reps, std::uint64_t seed) {
    params.validate();
    if (!std::is_sorted(tau_grid.begin(), tau_grid.end())) {
        throw Error(ErrorKind::Domain, "maturity grid must be sorted ascending");
    }
    DiscountCurve curve;
    curve.taus.assign(tau_grid.begin(), tau_grid.end());
    for (double tau : tau_grid) {
        curve.log_discounts.push_back(log_discount(params, q, r0, tau));
        curve.rates.push_back(annualized_rate(params, q, r0, tau));
    }

    BiasCorrectionConfig rep_cfg = cfg;
    rep_cfg.replicates = n_reps;
    const ReplicateSet set = confidence_replicates(params, q, rep_cfg, seed);
    std::vector<double> column(set.estimates.size());
    for (double tau : tau_grid) {
        for (std::size_t i = 0; i < set.estimates.size(); ++i) {
            const ReplicateEstimate& e = set.estimates[i];
            column[i] = annualized_rate(e.params, e.q, r0, tau);
        }
        const Band band = quantile_band(column);
        curve.band_5.push_back(std::min(band.lo, band.hi));
        curve.band_95.push_back(std::max(band.lo, band.hi));
    }
    return curve;
}

}  // namespace ltdr
