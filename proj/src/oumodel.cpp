// SPDX-License-Identifier: Apache-2.0
#include "ltdr/oumodel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ltdr/error.hpp"

namespace ltdr {
namespace {

// Scaled bracket functions of x = alpha * tau, regular at x = 0:
//   g1(x) = (1 - e^{-x}) / x
//   g2(x) = (x - (1 - e^{-x})) / x^2
//   g3(x) = (x - 2(1 - e^{-x}) + (1 - e^{-2x})/2) / x^3
// g2 and g3 lose digits to cancellation for small x, so below the cutoff
// they are summed from their Taylor series.
constexpr double kSeriesCutoff = 0.5;

double g1(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

double g2(double x) {
    if (x < kSeriesCutoff) {
        // sum_{n>=0} (-x)^n / (n+2)!
        double term = 0.5;
        double sum = term;
        for (int n = 1; n < 40; ++n) {
            term *= -x / (n + 2);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (x + std::expm1(-x)) / (x * x);
}

double g3(double x) {
    if (x < kSeriesCutoff) {
        // sum_{n>=3} (-1)^{n+1} (2^{n-1} - 2) x^{n-3} / n!
        double sum = 0.0;
        double xp = 1.0;         // x^{n-3}
        double fact = 6.0;       // n!
        double pow2 = 4.0;       // 2^{n-1}
        for (int n = 3; n < 60; ++n) {
            const double term = ((n % 2 == 1) ? 1.0 : -1.0) * (pow2 - 2.0) * xp / fact;
            sum += term;
            if (n > 3 && std::abs(term) < 1e-18 * std::abs(sum)) break;
            xp *= x;
            fact *= n + 1;
            pow2 *= 2.0;
        }
        return sum;
    }
    const double e1 = -std::expm1(-x);
    const double e2 = -std::expm1(-2.0 * x);
    return (x - 2.0 * e1 + 0.5 * e2) / (x * x * x);
}

void require_valid(const OuParams& p) { p.validate(); }

}  // namespace

double OuParams::sigma() const { return k / std::sqrt(2.0 * alpha); }

void OuParams::validate() const {
    if (!std::isfinite(m) || !std::isfinite(k) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::Domain, "OU parameters must be finite");
    }
    if (!(alpha > 0.0)) {
        throw Error(ErrorKind::Domain, "OU reversion rate alpha must be positive, got " + std::to_string(alpha));
    }
    if (k < 0.0) {
        throw Error(ErrorKind::Domain, "OU noise intensity k must be non-negative, got " + std::to_string(k));
    }
}

RiskSpec risk_adjusted_mean(const OuParams& params, double q) {
    require_valid(params);
    return {q, params.m + q * params.k / params.alpha};
}

double log_discount(const OuParams& params, double q, double r, double tau) {
    require_valid(params);
    if (!(tau >= 0.0)) {
        throw Error(ErrorKind::Domain, "maturity must be non-negative");
    }
    if (tau == 0.0) {
        return 0.0;
    }
    const double m_star = risk_adjusted_mean(params, q).m_star;
    const double x = params.alpha * tau;
    return -r * tau * g1(x) - m_star * params.alpha * tau * tau * g2(x) +
           0.5 * params.k * params.k * tau * tau * tau * g3(x);
}

double annualized_rate(const OuParams& params, double q, double r, double tau) {
    if (tau == 0.0) {
        require_valid(params);
        return r;
    }
    if (!(tau > 0.0)) {
        throw Error(ErrorKind::Domain, "maturity must be non-negative");
    }
    return -log_discount(params, q, r, tau) / tau;
}

double long_run_rate(const OuParams& params, double q) {
    require_valid(params);
    const double ratio = params.k / params.alpha;
    return params.m + ratio * (q - 0.5 * ratio);
}

CharCoeffs char_coeffs(const OuParams& params, double r0, std::complex<double> omega1, double t) {
    require_valid(params);
    if (!(t >= 0.0)) {
        throw Error(ErrorKind::Domain, "time must be non-negative");
    }
    const std::complex<double> minus_i{0.0, -1.0};
    if (omega1 != std::complex<double>{0.0, 0.0} && omega1 != minus_i) {
        throw Error(ErrorKind::Domain, "char_coeffs supports omega1 in {0, -i} only");
    }
    using namespace std::complex_literals;
    const double a = params.alpha;
    const double k2 = params.k * params.k;
    const double e1 = std::exp(-a * t);
    const double e2 = std::exp(-2.0 * a * t);

    CharCoeffs c;
    c.a_coef = k2 / (4.0 * a) * (1.0 - e2);
    c.b_coef = 1.0i * r0 * e1 + k2 * omega1 / (2.0 * a * a) * (1.0 - 2.0 * e1 + e2) + 1.0i * params.m * (1.0 - e1);
    c.c_coef = 1.0i * omega1 * r0 / a * (1.0 - e1) +
               k2 * omega1 * omega1 / (2.0 * a * a * a) * (a * t - 2.0 * (1.0 - e1) + 0.5 * (1.0 - e2)) +
               1.0i * params.m * omega1 * (t - (1.0 - e1) / a);
    return c;
}

double conditional_mean(const OuParams& params, double r0, double t) {
    const double e1 = std::exp(-params.alpha * t);
    return r0 * e1 + params.m * (1.0 - e1);
}

double conditional_variance(const OuParams& params, double t) {
    return params.k * params.k / (2.0 * params.alpha) * -std::expm1(-2.0 * params.alpha * t);
}

double transition_density(const OuParams& params, double r0, double t, double r) {
    require_valid(params);
    if (!(t > 0.0)) {
        throw Error(ErrorKind::Domain, "transition density needs t > 0");
    }
    if (params.k == 0.0) {
        throw Error(ErrorKind::Domain, "transition density is singular for k == 0");
    }
    const double var = conditional_variance(params, t);
    const double d = r - conditional_mean(params, r0, t);
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

namespace {

// erfc(z)/2 with z = level / scale; scale == 0 is the deterministic limit.
double half_erfc_ratio(double level, double scale) {
    if (scale == 0.0) {
        if (level > 0.0) return 0.0;
        if (level < 0.0) return 1.0;
        return 0.5;
    }
    return 0.5 * erfc(level / scale);
}

}  // namespace

double prob_negative(const OuParams& params, double r0, double t) {
    require_valid(params);
    if (!(t > 0.0)) {
        throw Error(ErrorKind::Domain, "negative-rate probability needs t > 0");
    }
    const double level = conditional_mean(params, r0, t);
    const double scale = params.k / std::sqrt(params.alpha) * std::sqrt(-std::expm1(-2.0 * params.alpha * t));
    return half_erfc_ratio(level, scale);
}

double prob_negative_stationary(const OuParams& params) {
    require_valid(params);
    const double mu = params.m / params.alpha;
    const double kappa = params.k / std::pow(params.alpha, 1.5);
    return half_erfc_ratio(mu, kappa);
}

double prob_below_long_run(const OuParams& params, double q) {
    require_valid(params);
    const double gap = params.m - long_run_rate(params, q);
    return half_erfc_ratio(std::sqrt(params.alpha) * gap, params.k);
}

}  // namespace ltdr
