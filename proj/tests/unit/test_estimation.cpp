// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ltdr/error.hpp"
#include "ltdr/estimation.hpp"
#include "ltdr/ratecore.hpp"

namespace {

using ltdr::ErrorKind;
using ltdr::OuParams;

const OuParams kUk{0.0084, 0.089, 0.82};

const std::vector<double> kAr1Fixture{0.01,    0.0483,  -0.0245, -0.0014, -0.0096, -0.0114, -0.0075,
                                      -0.0416, -0.0229, -0.0263, 0.0558,  0.0349,  0.0129,  0.0033,
                                      -0.0092, -0.0232, -0.0169, 0.0037,  -0.0004, 0.0215};

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const ltdr::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Config;
}

std::vector<double> simulate_annual(const OuParams& p, int years, std::uint64_t seed) {
    auto rng = ltdr::make_rng(seed, ltdr::Stream::Path, 0);
    return ltdr::simulate_ou_path(p, 1, years, std::nullopt, rng).annual_samples();
}

TEST(Estimation, ExactMleReference) {
    const OuParams p = ltdr::mle_ou_annual(kAr1Fixture);
    EXPECT_NEAR(p.m, -0.00056593395705278839, 1e-15);
    EXPECT_NEAR(p.k, 0.042221462051753959, 1e-14);
    EXPECT_NEAR(p.alpha, 1.403375951947436, 1e-13);
}

TEST(Estimation, MleErrors) {
    EXPECT_EQ(kind_of([] { ltdr::mle_ou_annual(std::vector<double>(20, 0.01)); }), ErrorKind::DegenerateVariance);
    std::vector<double> alternating;
    for (int i = 0; i < 20; ++i) alternating.push_back(i % 2 ? 0.02 : -0.02);
    EXPECT_EQ(kind_of([&] { ltdr::mle_ou_annual(alternating); }), ErrorKind::NonMeanReverting);
    std::vector<double> trend;
    for (int i = 0; i < 20; ++i) trend.push_back(0.001 * i * i);
    EXPECT_EQ(kind_of([&] { ltdr::mle_ou_annual(trend); }), ErrorKind::NonMeanReverting);
    EXPECT_THROW(ltdr::mle_ou_annual(std::vector<double>{0.1, 0.2, 0.1}), ltdr::Error);
}

TEST(Estimation, FixedAlphaAgreesAtMleAlpha) {
    const OuParams full = ltdr::mle_ou_annual(kAr1Fixture);
    const OuParams fixed = ltdr::mle_ou_fixed_alpha(kAr1Fixture, full.alpha);
    EXPECT_NEAR(fixed.m, full.m, 1e-14);
    EXPECT_NEAR(fixed.k, full.k, 1e-14);
    EXPECT_EQ(fixed.alpha, full.alpha);
}

TEST(Estimation, RecoversParametersFromLongSeries) {
    const auto v = simulate_annual(kUk, 20000, 3);
    const OuParams p = ltdr::mle_ou_annual(v);
    EXPECT_NEAR(p.alpha, kUk.alpha, 0.05);
    EXPECT_NEAR(p.k, kUk.k, 0.004);
    EXPECT_NEAR(p.m, kUk.m, 0.004);
    // Short lags only: beyond a few correlation times the sample values are noise.
    const auto acf = ltdr::fit_alpha_autocorrelation(v, 3);
    EXPECT_NEAR(acf.alpha, kUk.alpha, 0.1);
    EXPECT_EQ(acf.lags_used, 3);
    EXPECT_GT(acf.std_error, 0.0);
}

TEST(Estimation, AutocorrelationFitOnCenturyOfData) {
    const OuParams p{0.01, 0.08, 0.9};
    std::vector<double> alphas;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        alphas.push_back(ltdr::fit_alpha_autocorrelation(simulate_annual(p, 100, 100 + seed), 10).alpha);
    }
    const double med = ltdr::empirical_quantile(alphas, 0.5);
    EXPECT_GT(med, 0.2);
    EXPECT_LT(med, 1.4);
}

TEST(Estimation, AutocorrelationFitOnWhiteNoise) {
    // Independent draws: either no positive lag-1 correlation or a fast decay.
    auto rng = ltdr::make_rng(1, ltdr::Stream::Noise, 0);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> v(200);
        for (double& x : v) x = z(rng);
        try {
            EXPECT_GT(ltdr::fit_alpha_autocorrelation(v, 10).alpha, 1.5);
        } catch (const ltdr::Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::FitFailure);
        }
    }
}

TEST(Estimation, AutocorrelationFitNeedsData) {
    EXPECT_THROW(ltdr::fit_alpha_autocorrelation(kAr1Fixture, 10), ltdr::Error);
}

TEST(Estimation, KFromSigma) { EXPECT_NEAR(ltdr::k_from_sigma(0.0695, 0.82), 0.08900342690031660, 1e-16); }

TEST(Estimation, BlockMinMax) {
    const auto v = simulate_annual(kUk, 113, 8);
    const auto b = ltdr::block_minmax(v, 4);
    ASSERT_EQ(b.blocks.size(), 4u);
    EXPECT_EQ(b.alpha, ltdr::mle_ou_annual(v).alpha);
    for (const auto& blk : b.blocks) {
        EXPECT_EQ(blk.alpha, b.alpha);
        EXPECT_GE(blk.m, b.m.min);
        EXPECT_LE(blk.m, b.m.max);
        EXPECT_GE(blk.k, b.k.min);
        EXPECT_LE(blk.k, b.k.max);
    }
    // 113 = 28 + 28 + 28 + 29: the last block takes the remainder.
    const std::vector<double> last(v.end() - 29, v.end());
    EXPECT_NEAR(b.blocks.back().m, ltdr::mle_ou_fixed_alpha(last, b.alpha).m, 1e-15);
    EXPECT_THROW(ltdr::block_minmax(v, 30), ltdr::Error);
}

TEST(Estimation, MarketPriceOfRisk) {
    EXPECT_NEAR(ltdr::estimate_q(0.0084, 0.015, kUk), 0.1197539147103299, 1e-12);
    // Round trip through the model's own 10-year yield.
    const double y10 = ltdr::annualized_rate(kUk, 0.37, kUk.m, 10.0);
    EXPECT_NEAR(ltdr::estimate_q(kUk.m, y10, kUk), 0.37, 1e-12);
    EXPECT_EQ(kind_of([] { ltdr::estimate_q(0.01, 0.02, {0.01, 0.0, 1.0}); }), ErrorKind::IllConditioned);
}

TEST(Estimation, RawEstimate) {
    const auto s = simulate_annual(kUk, 60, 2);
    std::vector<double> l(s.size(), 0.02);
    const auto raw = ltdr::estimate_raw(s, l);
    EXPECT_EQ(raw.params, ltdr::mle_ou_annual(s));
    EXPECT_DOUBLE_EQ(raw.mean_3m, ltdr::mean(s));
    EXPECT_DOUBLE_EQ(raw.mean_10y, 0.02);
    EXPECT_NEAR(raw.q, ltdr::estimate_q(raw.params.m, 0.02, raw.params), 1e-15);
}

TEST(Estimation, EmpiricalQuantile) {
    const std::vector<double> v{5, 1, 4, 2, 3};
    EXPECT_DOUBLE_EQ(ltdr::empirical_quantile(v, 0.05), 1.2);
    EXPECT_DOUBLE_EQ(ltdr::empirical_quantile(v, 0.95), 4.8);
    EXPECT_DOUBLE_EQ(ltdr::empirical_quantile(v, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(ltdr::empirical_quantile(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(ltdr::empirical_quantile(v, 1.0), 5.0);
    EXPECT_THROW(ltdr::empirical_quantile({}, 0.5), ltdr::Error);
    const auto b = ltdr::quantile_band(v);
    EXPECT_DOUBLE_EQ(b.lo, 1.2);
    EXPECT_DOUBLE_EQ(b.hi, 4.8);
}

ltdr::BiasCorrectionConfig small_config() {
    ltdr::BiasCorrectionConfig cfg;
    cfg.replicates = 60;
    cfg.steps_per_year = 12;
    cfg.years = 60;
    cfg.ten_year_target_std = 0.04;
    cfg.threads = 1;
    return cfg;
}

TEST(Estimation, BiasCorrectionIsDeterministicAndIdempotent) {
    ltdr::RawEstimate target{{0.008, 0.08, 0.9}, 0.15, 0.008, 0.015};
    const auto cfg = small_config();
    const auto a = ltdr::bias_correct(target, cfg, 5);
    const auto b = ltdr::bias_correct(target, cfg, 5);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.q, b.q);
    EXPECT_TRUE(a.converged);
    EXPECT_LT(a.params.alpha, target.params.alpha);  // finite-sample estimates overstate reversion
    ltdr::RawEstimate restart = target;
    restart.params = a.params;
    restart.q = a.q;
    const auto again = ltdr::bias_correct(target, cfg, 5, restart);
    EXPECT_TRUE(again.converged);
    EXPECT_LE(again.iterations, 2);
    EXPECT_NEAR(again.params.alpha / a.params.alpha, 1.0, 2 * cfg.tolerance);
    EXPECT_NEAR(again.params.k / a.params.k, 1.0, 2 * cfg.tolerance);
}

TEST(Estimation, BiasCorrectionThreadInvariant) {
    ltdr::RawEstimate target{{0.008, 0.08, 0.9}, 0.15, 0.008, 0.015};
    auto cfg = small_config();
    const auto a = ltdr::bias_correct(target, cfg, 6);
    cfg.threads = 3;
    const auto b = ltdr::bias_correct(target, cfg, 6);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.q, b.q);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Estimation, ConfigValidation) {
    auto cfg = small_config();
    cfg.years = 5;
    EXPECT_THROW(cfg.validate(), ltdr::Error);
    cfg = small_config();
    cfg.damping = 0.0;
    EXPECT_THROW(cfg.validate(), ltdr::Error);
    cfg = small_config();
    cfg.replicates = 0;
    EXPECT_THROW(cfg.validate(), ltdr::Error);
}

TEST(Estimation, ConfidenceReplicates) {
    const auto cfg = small_config();
    const auto set = ltdr::confidence_replicates(kUk, 0.13, cfg, 4);
    EXPECT_EQ(set.estimates.size() + set.failures, cfg.replicates);
    const auto bands = ltdr::summarize(set);
    EXPECT_LT(bands.alpha.lo, bands.alpha.hi);
    EXPECT_LT(bands.m.lo, kUk.m);
    EXPECT_GT(bands.m.hi, kUk.m);
    for (const auto& e : set.estimates) {
        EXPECT_NEAR(e.r_infinity, ltdr::long_run_rate(e.params, e.q), 1e-15);
    }
}

// The replicate map is linear and anchored at the ensemble mean, so with no
// rejected replicates the mapped replicates average back to the inputs.
TEST(Estimation, ConfidenceReplicatesCenterOnInputs) {
    const auto cfg = small_config();
    const auto set = ltdr::confidence_replicates(kUk, 0.13, cfg, 9);
    ASSERT_EQ(set.failures, 0u);
    double m = 0, k = 0, a = 0, q = 0;
    for (const auto& e : set.estimates) {
        m += e.params.m;
        k += e.params.k;
        a += e.params.alpha;
        q += e.q;
    }
    const double n = static_cast<double>(set.estimates.size());
    EXPECT_NEAR(m / n, kUk.m, 1e-12);
    EXPECT_NEAR(k / n, kUk.k, 1e-12);
    EXPECT_NEAR(a / n, kUk.alpha, 1e-12);
    EXPECT_NEAR(q / n, 0.13, 1e-12);
}

TEST(Estimation, ConfidenceWithoutNoiseCollapses) {
    const OuParams p{0.02, 0.0, 0.8};
    const auto bands = ltdr::confidence_quantiles(p, 0.0, small_config(), 1);
    EXPECT_EQ(bands.m.lo, 0.02);
    EXPECT_EQ(bands.m.hi, 0.02);
    EXPECT_EQ(bands.r_infinity.lo, 0.02);
    EXPECT_EQ(bands.r_infinity.hi, 0.02);
}

TEST(Estimation, RunEstimationPipeline) {
    ltdr::SurrogateConfig sc;
    sc.years = 80;
    sc.steps_per_year = 12;
    sc.ten_year_target_std = 0.04;
    auto prng = ltdr::make_rng(21, ltdr::Stream::Path, 0);
    auto nrng = ltdr::make_rng(21, ltdr::Stream::Noise, 0);
    const auto pair = ltdr::simulate_surrogate_pair(kUk, 0.13, sc, prng, nrng);
    const ltdr::RealRateSeries s{ltdr::TimeSeries({1900, 12}, ltdr::Frequency::Annual, pair.three_month),
                                 ltdr::Maturity::ThreeMonth};
    const ltdr::RealRateSeries l{ltdr::TimeSeries({1900, 12}, ltdr::Frequency::Annual, pair.ten_year),
                                 ltdr::Maturity::TenYear};
    ltdr::EstimationConfig cfg;
    cfg.bias = small_config();
    cfg.bias.years = 0;
    cfg.bias.ten_year_target_std.reset();
    const auto rep = ltdr::run_estimation(s, l, cfg, 3);
    EXPECT_EQ(rep.n_three_month, 80u);
    EXPECT_EQ(rep.n_overlap, 80u);
    EXPECT_EQ(rep.bias_config.years, 80);
    ASSERT_TRUE(rep.bias_config.ten_year_target_std.has_value());
    EXPECT_DOUBLE_EQ(*rep.bias_config.ten_year_target_std, ltdr::sample_stddev(pair.ten_year));
    ASSERT_TRUE(rep.corrected.has_value());
    ASSERT_TRUE(rep.quantiles.has_value());
    EXPECT_EQ(rep.params, rep.corrected->params);
    EXPECT_NEAR(rep.r_infinity, ltdr::long_run_rate(rep.params, rep.q), 1e-16);
    EXPECT_EQ(rep.three_month_range, "1900..1979");

    cfg.bias_correction = false;
    cfg.quantiles = false;
    const auto raw_only = ltdr::run_estimation(s, l, cfg, 3);
    EXPECT_FALSE(raw_only.corrected.has_value());
    EXPECT_FALSE(raw_only.quantiles.has_value());
    EXPECT_EQ(raw_only.params, raw_only.raw.params);
}

}  // namespace
