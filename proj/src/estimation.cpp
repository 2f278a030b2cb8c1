// SPDX-License-Identifier: Apache-2.0
#include "ltdr/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ltdr/error.hpp"
#include "ltdr/parallel.hpp"
#include "ltdr/ratecore.hpp"

namespace ltdr {
namespace {

constexpr double kMaxFailureFraction = 0.2;

struct ArMoments {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    double n = 0.0;
};

ArMoments ar_moments(std::span<const double> v) {
    ArMoments mo;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double x = v[i];
        const double y = v[i + 1];
        mo.sx += x;
        mo.sy += y;
        mo.sxx += x * x;
        mo.sxy += x * y;
        mo.syy += y * y;
    }
    mo.n = static_cast<double>(v.size() - 1);
    return mo;
}

double residual_variance(std::span<const double> v, double c, double phi) {
    double ss = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double e = v[i + 1] - c - phi * v[i];
        ss += e * e;
    }
    return ss / static_cast<double>(v.size() - 1);
}

double k_from_residual_variance(double s2, double alpha, double dt) {
    // s2 = k^2 (1 - phi^2) / (2 alpha); 1 - phi^2 = -expm1(-2 alpha dt)
    const double one_minus_phi2 = -std::expm1(-2.0 * alpha * dt);
    return std::sqrt(std::max(0.0, s2 * 2.0 * alpha / one_minus_phi2));
}

bool is_constant(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

OuParams mle_ou_annual(std::span<const double> values, double dt) {
    if (!(dt > 0.0)) {
        throw Error(ErrorKind::Domain, "sampling interval must be positive");
    }
    if (values.size() < 10) {
        throw Error(ErrorKind::InsufficientData,
                    "MLE needs at least 10 observations, got " + std::to_string(values.size()));
    }
    if (is_constant(values)) {
        throw Error(ErrorKind::DegenerateVariance, "series is constant; OU parameters are not identifiable");
    }
    const ArMoments mo = ar_moments(values);
    const double denom = mo.n * mo.sxx - mo.sx * mo.sx;
    if (!(denom > 0.0)) {
        throw Error(ErrorKind::DegenerateVariance, "lagged values have zero variance");
    }
    const double phi = (mo.n * mo.sxy - mo.sx * mo.sy) / denom;
    if (!(phi > 0.0 && phi < 1.0)) {
        throw Error(ErrorKind::NonMeanReverting,
                    "fitted AR(1) coefficient " + std::to_string(phi) + " outside (0, 1)");
    }
    const double c = (mo.sy - phi * mo.sx) / mo.n;
    OuParams p;
    p.alpha = -std::log(phi) / dt;
    p.m = c / (1.0 - phi);
    p.k = k_from_residual_variance(residual_variance(values, c, phi), p.alpha, dt);
    return p;
}

OuParams mle_ou_annual(const RealRateSeries& series, double dt) { return mle_ou_annual(series.base.values(), dt); }

OuParams mle_ou_fixed_alpha(std::span<const double> values, double alpha, double dt) {
    if (!(alpha > 0.0) || !(dt > 0.0)) {
        throw Error(ErrorKind::Domain, "alpha and dt must be positive");
    }
    if (values.size() < 3) {
        throw Error(ErrorKind::InsufficientData, "fixed-alpha MLE needs at least 3 observations");
    }
    const double phi = std::exp(-alpha * dt);
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        c += values[i + 1] - phi * values[i];
    }
    c /= static_cast<double>(values.size() - 1);
    OuParams p;
    p.alpha = alpha;
    p.m = c / (1.0 - phi);
    p.k = k_from_residual_variance(residual_variance(values, c, phi), alpha, dt);
    return p;
}

AlphaFit fit_alpha_autocorrelation(std::span<const double> values, int max_lag) {
    if (max_lag < 1) {
        throw Error(ErrorKind::Domain, "max_lag must be at least 1");
    }
    if (values.size() < static_cast<std::size_t>(3 * max_lag)) {
        throw Error(ErrorKind::InsufficientData, "autocorrelation fit needs at least 3 * max_lag observations");
    }
    const double mu = mean(values);
    double c0 = 0.0;
    for (double v : values) {
        c0 += (v - mu) * (v - mu);
    }
    if (c0 == 0.0) {
        throw Error(ErrorKind::DegenerateVariance, "series is constant");
    }
    // Leading run of positive autocorrelations.
    std::vector<double> lags;
    std::vector<double> logs;
    for (int lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < values.size(); ++t) {
            c += (values[t] - mu) * (values[t + static_cast<std::size_t>(lag)] - mu);
        }
        const double rho = c / c0;
        if (!(rho > 0.0)) {
            break;
        }
        lags.push_back(lag);
        logs.push_back(std::log(rho));
    }
    if (lags.empty()) {
        throw Error(ErrorKind::FitFailure, "lag-1 autocorrelation is not positive; no exponential decay to fit");
    }
    // ln rho(l) = -alpha l, a regression through the origin.
    double sll = 0.0;
    double sly = 0.0;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        sll += lags[i] * lags[i];
        sly += lags[i] * logs[i];
    }
    AlphaFit fit;
    fit.alpha = -sly / sll;
    fit.lags_used = static_cast<int>(lags.size());
    if (lags.size() > 1) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < lags.size(); ++i) {
            const double e = logs[i] + fit.alpha * lags[i];
            ssr += e * e;
        }
        fit.std_error = std::sqrt(ssr / static_cast<double>(lags.size() - 1) / sll);
    }
    if (!(fit.alpha > 0.0)) {
        throw Error(ErrorKind::FitFailure, "autocorrelation does not decay");
    }
    return fit;
}

AlphaFit fit_alpha_autocorrelation(const RealRateSeries& series, int max_lag) {
    return fit_alpha_autocorrelation(series.base.values(), max_lag);
}

double k_from_sigma(double sigma, double alpha) {
    if (!(sigma >= 0.0) || !(alpha > 0.0)) {
        throw Error(ErrorKind::Domain, "k_from_sigma needs sigma >= 0 and alpha > 0");
    }
    return sigma * std::sqrt(2.0 * alpha);
}

BlockMinMax block_minmax(std::span<const double> values, int n_blocks, double dt) {
    if (n_blocks < 1) {
        throw Error(ErrorKind::Domain, "need at least one block");
    }
    const std::size_t len = values.size() / static_cast<std::size_t>(n_blocks);
    if (len < 5) {
        throw Error(ErrorKind::InsufficientData, "blocks would hold fewer than 5 observations (series length " +
                                                     std::to_string(values.size()) + ", " +
                                                     std::to_string(n_blocks) + " blocks)");
    }
    BlockMinMax out;
    out.alpha = mle_ou_annual(values, dt).alpha;
    for (int b = 0; b < n_blocks; ++b) {
        const std::size_t first = static_cast<std::size_t>(b) * len;
        const std::size_t count = (b == n_blocks - 1) ? values.size() - first : len;
        out.blocks.push_back(mle_ou_fixed_alpha(values.subspan(first, count), out.alpha, dt));
    }
    const auto [mlo, mhi] = std::minmax_element(out.blocks.begin(), out.blocks.end(),
                                                [](const OuParams& a, const OuParams& b) { return a.m < b.m; });
    const auto [klo, khi] = std::minmax_element(out.blocks.begin(), out.blocks.end(),
                                                [](const OuParams& a, const OuParams& b) { return a.k < b.k; });
    out.m = {mlo->m, mhi->m};
    out.k = {klo->k, khi->k};
    return out;
}

BlockMinMax block_minmax(const RealRateSeries& series, int n_blocks, double dt) {
    return block_minmax(series.base.values(), n_blocks, dt);
}

double estimate_q(double mean_3m, double mean_10y, const OuParams& params, double tau_long) {
    params.validate();
    if (!(tau_long > 0.0)) {
        throw Error(ErrorKind::Domain, "long maturity must be positive");
    }
    if (params.k == 0.0) {
        throw Error(ErrorKind::IllConditioned, "market price of risk is undefined for k == 0");
    }
    // ln D is affine in the drift mean: ln D(m*) = base - coef * m*.
    OuParams at{0.0, params.k, params.alpha};
    const double base = log_discount(at, 0.0, mean_3m, tau_long);
    at.m = 1.0;
    const double coef = base - log_discount(at, 0.0, mean_3m, tau_long);
    if (!(coef > 1e-12 * tau_long)) {
        throw Error(ErrorKind::IllConditioned, "discount function is insensitive to the drift mean");
    }
    const double target = -tau_long * mean_10y;
    const double m_star = (base - target) / coef;
    return (m_star - mean_3m) * params.alpha / params.k;
}

RawEstimate estimate_raw(std::span<const double> three_month, std::span<const double> ten_year, double dt) {
    RawEstimate raw;
    raw.params = mle_ou_annual(three_month, dt);
    raw.mean_3m = mean(three_month);
    raw.mean_10y = mean(ten_year);
    raw.q = estimate_q(raw.params.m, raw.mean_10y, raw.params);
    return raw;
}

void BiasCorrectionConfig::validate() const {
    if (replicates < 1) {
        throw Error(ErrorKind::Config, "replicates must be >= 1");
    }
    if (!(tolerance > 0.0)) {
        throw Error(ErrorKind::Config, "tolerance must be positive");
    }
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw Error(ErrorKind::Config, "damping must lie in (0, 1]");
    }
    if (max_iterations < 1) {
        throw Error(ErrorKind::Config, "max_iterations must be >= 1");
    }
    if (years < 10) {
        throw Error(ErrorKind::Config, "simulated series need at least 10 years (got " + std::to_string(years) + ")");
    }
    if (steps_per_year < 1) {
        throw Error(ErrorKind::Config, "steps_per_year must be >= 1");
    }
}

SurrogateConfig BiasCorrectionConfig::surrogate() const {
    SurrogateConfig s;
    s.years = years;
    s.steps_per_year = steps_per_year;
    s.ten_year_target_std = ten_year_target_std;
    s.threads = threads;
    return s;
}

namespace {

struct Ensemble {
    std::vector<std::optional<RawEstimate>> estimates;
    std::size_t failures = 0;
};

Ensemble run_ensemble(const OuParams& params, double q, const BiasCorrectionConfig& cfg, std::uint64_t seed) {
    const SurrogateConfig sur = cfg.surrogate();
    Ensemble ens;
    ens.estimates.resize(cfg.replicates);
    parallel_for(cfg.replicates, cfg.threads, [&](std::size_t i) {
        Rng path_rng = make_rng(seed, Stream::Path, i);
        Rng noise_rng = make_rng(seed, Stream::Noise, i);
        const SurrogatePair pair = simulate_surrogate_pair(params, q, sur, path_rng, noise_rng);
        try {
            ens.estimates[i] = estimate_raw(pair.three_month, pair.ten_year);
        } catch (const Error&) {
            ens.estimates[i].reset();
        }
    });
    ens.failures = static_cast<std::size_t>(
        std::count_if(ens.estimates.begin(), ens.estimates.end(), [](const auto& e) { return !e.has_value(); }));
    if (static_cast<double>(ens.failures) > kMaxFailureFraction * static_cast<double>(cfg.replicates)) {
        throw Error(ErrorKind::TooManyFailures, std::to_string(ens.failures) + " of " +
                                                    std::to_string(cfg.replicates) +
                                                    " replicate estimations failed");
    }
    return ens;
}

RawEstimate ensemble_mean(const Ensemble& ens) {
    RawEstimate avg{};
    avg.params = {0.0, 0.0, 0.0};
    double n = 0.0;
    for (const auto& e : ens.estimates) {
        if (!e) continue;
        avg.params.m += e->params.m;
        avg.params.k += e->params.k;
        avg.params.alpha += e->params.alpha;
        avg.q += e->q;
        n += 1.0;
    }
    avg.params.m /= n;
    avg.params.k /= n;
    avg.params.alpha /= n;
    avg.q /= n;
    return avg;
}

// Largest per-component change, each measured on its natural scale:
// k and alpha relative to themselves, m relative to the stationary spread,
// q relative to max(|q|, 0.1).
double relative_change(const RawEstimate& from, const RawEstimate& to) {
    const double sigma = std::max(from.params.sigma(), 1e-12);
    const double dm = std::abs(to.params.m - from.params.m) / std::max(std::abs(from.params.m), sigma);
    const double dk = std::abs(to.params.k - from.params.k) / std::max(from.params.k, 1e-12);
    const double da = std::abs(to.params.alpha - from.params.alpha) / from.params.alpha;
    const double dq = std::abs(to.q - from.q) / std::max(std::abs(from.q), 0.1);
    return std::max({dm, dk, da, dq});
}

double positive_step(double value, double step) {
    double s = step;
    while (value + s <= 0.0) {
        s *= 0.5;
    }
    return value + s;
}

}  // namespace

BiasCorrectionResult bias_correct(const RawEstimate& target, const BiasCorrectionConfig& cfg, std::uint64_t seed,
                                  std::optional<RawEstimate> start) {
    cfg.validate();
    target.params.validate();
    const std::uint64_t stream_seed = derive_seed(seed, Stream::BiasCorrection, 0);

    RawEstimate theta = start.value_or(target);
    BiasCorrectionResult result;
    RawEstimate best = theta;
    double best_residual = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const Ensemble ens = run_ensemble(theta.params, theta.q, cfg, stream_seed);
        const RawEstimate avg = ensemble_mean(ens);
        result.failed_replicates = ens.failures;

        const double residual = relative_change(target, avg);
        if (residual < best_residual) {
            best_residual = residual;
            best = theta;
        }

        RawEstimate next = theta;
        next.params.m += cfg.damping * (target.params.m - avg.params.m);
        next.q += cfg.damping * (target.q - avg.q);
        next.params.k = positive_step(theta.params.k, cfg.damping * (target.params.k - avg.params.k));
        next.params.alpha = positive_step(theta.params.alpha, cfg.damping * (target.params.alpha - avg.params.alpha));

        result.iterations = iter;
        result.last_relative_change = relative_change(theta, next);
        theta = next;
        if (result.last_relative_change < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }
    const RawEstimate& chosen = result.converged ? theta : best;
    result.params = chosen.params;
    result.q = chosen.q;
    return result;
}

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw Error(ErrorKind::EmptyInput, "quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Band quantile_band(const std::vector<double>& values) {
    return {empirical_quantile(values, 0.05), empirical_quantile(values, 0.95)};
}

namespace {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

Vec4 as_vec(const OuParams& p, double q) { return {p.m, p.k, p.alpha, q}; }

// Solves a x = b by Gaussian elimination with partial pivoting.
Vec4 solve4(Mat4 a, Vec4 b) {
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (!(std::abs(a[piv][col]) > 1e-10)) {
            throw Error(ErrorKind::IllConditioned, "bias map is singular; cannot map replicates");
        }
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec4 x{};
    for (std::size_t i = 4; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < 4; ++c) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

}  // namespace

ReplicateSet confidence_replicates(const OuParams& params, double q, const BiasCorrectionConfig& cfg,
                                   std::uint64_t seed) {
    cfg.validate();
    params.validate();
    ReplicateSet set;
    if (params.k == 0.0) {
        // Without noise every simulated dataset reproduces the generating
        // parameters exactly.
        set.estimates.assign(cfg.replicates, {params, q, long_run_rate(params, q)});
        set.raw_mean = params;
        set.raw_mean_q = q;
        return set;
    }
    const std::uint64_t stream = derive_seed(seed, Stream::Confidence, 0);
    const Ensemble ens = run_ensemble(params, q, cfg, stream);
    const RawEstimate avg = ensemble_mean(ens);
    set.raw_mean = avg.params;
    set.raw_mean_q = avg.q;

    // Jacobian of the mean raw estimate with respect to (m, k, alpha, q),
    // forward differences on the same replicate streams.
    const Vec4 theta = as_vec(params, q);
    const Vec4 g0 = as_vec(avg.params, avg.q);
    const Vec4 h{0.05 * params.sigma(), 0.02 * params.k, 0.02 * params.alpha, 0.02 * std::max(std::abs(q), 0.5)};
    Mat4 jac{};
    for (std::size_t j = 0; j < 4; ++j) {
        Vec4 t = theta;
        t[j] += h[j];
        const RawEstimate shifted = ensemble_mean(run_ensemble({t[0], t[1], t[2]}, t[3], cfg, stream));
        const Vec4 g1 = as_vec(shifted.params, shifted.q);
        for (std::size_t i = 0; i < 4; ++i) jac[i][j] = (g1[i] - g0[i]) / h[j];
    }

    set.failures = ens.failures;
    for (const auto& e : ens.estimates) {
        if (!e) continue;
        const Vec4 raw = as_vec(e->params, e->q);
        Vec4 d{};
        for (std::size_t i = 0; i < 4; ++i) d[i] = raw[i] - g0[i];
        const Vec4 x = solve4(jac, d);
        ReplicateEstimate r;
        r.params = {theta[0] + x[0], theta[1] + x[1], theta[2] + x[2]};
        r.q = theta[3] + x[3];
        if (!(r.params.k > 0.0) || !(r.params.alpha > 0.0)) {
            ++set.failures;
            continue;
        }
        r.r_infinity = long_run_rate(r.params, r.q);
        set.estimates.push_back(r);
    }
    return set;
}

ConfidenceBands summarize(const ReplicateSet& set) {
    const std::size_t n = set.estimates.size();
    std::vector<double> m(n), k(n), a(n), q(n), ri(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ReplicateEstimate& e = set.estimates[i];
        m[i] = e.params.m;
        k[i] = e.params.k;
        a[i] = e.params.alpha;
        q[i] = e.q;
        ri[i] = e.r_infinity;
    }
    ConfidenceBands out;
    out.m = quantile_band(m);
    out.k = quantile_band(k);
    out.alpha = quantile_band(a);
    out.q = quantile_band(q);
    out.r_infinity = quantile_band(ri);
    out.replicates = n;
    out.failures = set.failures;
    return out;
}

ConfidenceBands confidence_quantiles(const OuParams& params, double q, const BiasCorrectionConfig& cfg,
                                     std::uint64_t seed) {
    return summarize(confidence_replicates(params, q, cfg, seed));
}

EstimationReport run_estimation(const RealRateSeries& three_month, const RealRateSeries& ten_year,
                                const EstimationConfig& cfg, std::uint64_t seed) {
    const TimeSeries short_series = to_annual(three_month.base);
    const TimeSeries long_series = to_annual(ten_year.base);
    const AlignedPair overlap = align_annual(short_series, long_series);

    EstimationReport rep;
    rep.n_three_month = short_series.size();
    rep.n_ten_year = long_series.size();
    rep.n_overlap = overlap.years.size();
    rep.three_month_range = short_series.start().to_string(Frequency::Annual) + ".." +
                            short_series.end().to_string(Frequency::Annual);
    rep.ten_year_range = long_series.start().to_string(Frequency::Annual) + ".." +
                         long_series.end().to_string(Frequency::Annual);
    rep.overlap_range = std::to_string(overlap.years.front()) + ".." + std::to_string(overlap.years.back());
    rep.last_three_month = short_series[short_series.size() - 1];

    rep.raw.params = mle_ou_annual(short_series.values());
    rep.raw.mean_3m = mean(short_series.values());
    rep.raw.mean_10y = mean(overlap.b);
    rep.raw.q = estimate_q(rep.raw.params.m, rep.raw.mean_10y, rep.raw.params, cfg.tau_long);

    try {
        rep.alpha_acf = fit_alpha_autocorrelation(short_series.values(), cfg.acf_max_lag);
    } catch (const Error&) {
        rep.alpha_acf = {};  // the cross-check is advisory; alpha comes from the MLE
    }
    rep.block_min_max = block_minmax(short_series.values(), cfg.blocks);
    rep.ten_year_std = sample_stddev(long_series.values());

    BiasCorrectionConfig bias = cfg.bias;
    if (bias.years == 0) {
        bias.years = static_cast<int>(short_series.size());
    }
    if (!bias.ten_year_target_std) {
        bias.ten_year_target_std = rep.ten_year_std;
    }
    rep.bias_config = bias;

    rep.params = rep.raw.params;
    rep.q = rep.raw.q;
    if (cfg.bias_correction) {
        rep.corrected = bias_correct(rep.raw, bias, seed);
        rep.params = rep.corrected->params;
        rep.q = rep.corrected->q;
    }
    rep.m_star = risk_adjusted_mean(rep.params, rep.q).m_star;
    rep.r_infinity = long_run_rate(rep.params, rep.q);
    if (cfg.quantiles) {
        rep.quantiles = confidence_quantiles(rep.params, rep.q, bias, seed);
    }
    return rep;
}

}  // namespace ltdr
