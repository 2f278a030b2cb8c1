// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace ltdr {

/// Instantaneous Ornstein-Uhlenbeck short-rate parameters, annualized.
///
///   dr = -alpha (r - m) dt + k dW
///
/// k may be zero (deterministic relaxation); alpha must be positive.
struct OuParams {
    double m = 0.0;      ///< stationary mean, fraction/year
    double k = 0.0;      ///< noise intensity, fraction/year^(3/2)
    double alpha = 1.0;  ///< reversion rate, 1/year

    /// Stationary standard deviation k / sqrt(2 alpha).
    double sigma() const;

    /// Throws Domain unless alpha > 0, k >= 0 and all fields are finite.
    void validate() const;

    bool operator==(const OuParams&) const = default;
};

struct RiskSpec {
    double q = 0.0;       ///< market price of risk
    double m_star = 0.0;  ///< risk-adjusted mean m + q k / alpha
};

RiskSpec risk_adjusted_mean(const OuParams& params, double q);

/// ln D(tau) for the risk-adjusted OU model with current rate r.
double log_discount(const OuParams& params, double q, double r, double tau);

/// -ln D(tau) / tau; returns r at tau == 0 (the small-maturity limit).
double annualized_rate(const OuParams& params, double q, double r, double tau);

/// Asymptotic decay rate of the discount function:
/// m + q k / alpha - k^2 / (2 alpha^2).
double long_run_rate(const OuParams& params, double q);

/// Coefficients of the Gaussian joint characteristic function of the
/// (integrated rate, rate) process under the unadjusted drift:
///   p~(w1, w2, t) = exp(-A w2^2 - B w2 - C).
/// Only w1 in {0, -i} is supported.
struct CharCoeffs {
    std::complex<double> a_coef;
    std::complex<double> b_coef;
    std::complex<double> c_coef;
};

CharCoeffs char_coeffs(const OuParams& params, double r0, std::complex<double> omega1, double t);

/// Gaussian transition density of r(t) given r(0) = r0.
double transition_density(const OuParams& params, double r0, double t, double r);

/// Conditional mean and variance of r(t) given r(0) = r0.
double conditional_mean(const OuParams& params, double r0, double t);
double conditional_variance(const OuParams& params, double t);

/// P(r(t) < 0 | r(0) = r0).
double prob_negative(const OuParams& params, double r0, double t);

/// Stationary P(r < 0) = erfc(mu / kappa) / 2 with mu = m/alpha and
/// kappa = k / alpha^(3/2).
double prob_negative_stationary(const OuParams& params);

/// Stationary P(r < r_infinity).
double prob_below_long_run(const OuParams& params, double q);

/// Complementary error function, absolute error below 1e-15 on the real line.
double erfc(double x);

}  // namespace ltdr
