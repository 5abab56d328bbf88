// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file pricers.hpp
 * @brief Closed-form European pricers (Black, Bachelier, CEV with absorbing
 *        boundary), implied-volatility inversion, and the erfc time-value
 *        forms used by the exactness and truncation tests.
 */

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "sabrsmile/detail/quadrature.hpp"
#include "sabrsmile/detail/special.hpp"

namespace sabrsmile {

struct OptionSpec {
    double strike;
    double maturity;        ///< years, > 0
    bool is_call = true;
    double df = 1.0;        ///< discount factor in (0, 1]

    void validate() const {
        if (!(maturity > 0.0)) throw std::invalid_argument("OptionSpec: maturity must be positive");
        if (!(df > 0.0 && df <= 1.0))
            throw std::invalid_argument("OptionSpec: discount factor must be in (0, 1]");
    }
};

// ---------------------------------------------------------------------------
// Black
// ---------------------------------------------------------------------------

inline double black_price(double f0, const OptionSpec& spec, double sigma) {
    spec.validate();
    if (!(f0 > 0.0) || !(spec.strike > 0.0))
        throw std::domain_error("black_price: forward and strike must be positive");
    if (sigma < 0.0) throw std::domain_error("black_price: sigma must be non-negative");
    const double k = spec.strike;
    double call;
    if (sigma == 0.0) {
        call = std::max(f0 - k, 0.0);
    } else {
        const double st = sigma * std::sqrt(spec.maturity);
        const double d1 = std::log(f0 / k) / st + 0.5 * st;
        call = f0 * detail::norm_cdf(d1) - k * detail::norm_cdf(d1 - st);
    }
    const double fwd = spec.is_call ? call : call - (f0 - k);
    return spec.df * fwd;
}

inline double black_vega(double f0, const OptionSpec& spec, double sigma) {
    if (sigma <= 0.0) return 0.0;
    const double st = sigma * std::sqrt(spec.maturity);
    const double d1 = std::log(f0 / spec.strike) / st + 0.5 * st;
    return spec.df * f0 * detail::norm_pdf(d1) * std::sqrt(spec.maturity);
}

// ---------------------------------------------------------------------------
// Bachelier (normal model, strike may be any real)
// ---------------------------------------------------------------------------

inline double bachelier_price(double f0, const OptionSpec& spec, double sigma) {
    spec.validate();
    if (sigma < 0.0) throw std::domain_error("bachelier_price: sigma must be non-negative");
    const double k = spec.strike;
    double call;
    if (sigma == 0.0) {
        call = std::max(f0 - k, 0.0);
    } else {
        const double st = sigma * std::sqrt(spec.maturity);
        const double d = (f0 - k) / st;
        call = (f0 - k) * detail::norm_cdf(d) + st * detail::norm_pdf(d);
    }
    const double fwd = spec.is_call ? call : call - (f0 - k);
    return spec.df * fwd;
}

// ---------------------------------------------------------------------------
// CEV with absorbing boundary at zero (noncentral chi-square series)
// ---------------------------------------------------------------------------

/// Undiscounted absorbed-CEV call through Poisson-weighted regularized
/// incomplete gammas; the two weight families are recurred outward from
/// their common mode and truncated at 1e-14 tail mass.
inline double cev_call_forward(double f0, double k, double maturity, double sigma,
                               double beta0);

inline double cev_price(double f0, const OptionSpec& spec, double sigma, double beta0) {
    spec.validate();
    if (!(f0 > 0.0) || !(spec.strike > 0.0))
        throw std::domain_error("cev_price: forward and strike must be positive");
    if (!(beta0 >= 0.0 && beta0 <= 1.0))
        throw std::domain_error("cev_price: beta0 must be in [0, 1]");
    if (sigma < 0.0) throw std::domain_error("cev_price: sigma must be non-negative");
    if (beta0 > 1.0 - 1e-6) {
        // conditioning of the series degrades; the lognormal limit is exact
        // at beta0 == 1 and indistinguishable at this distance
        return black_price(f0, spec, sigma);
    }
    double call;
    if (sigma == 0.0) {
        call = std::max(f0 - spec.strike, 0.0);
    } else {
        call = cev_call_forward(f0, spec.strike, spec.maturity, sigma, beta0);
    }
    const double fwd = spec.is_call ? call : call - (f0 - spec.strike);
    return spec.df * fwd;
}

inline double cev_call_forward(double f0, double k, double maturity, double sigma,
                               double beta0) {
    const double om = 1.0 - beta0;
    const double theta = 1.0 / (2.0 * om);
    const double denom = 2.0 * om * om * sigma * sigma * maturity;
    const double xt = std::pow(f0, 2.0 * om) / denom;   // spot parameter
    const double ct = std::pow(k, 2.0 * om) / denom;    // strike parameter

    // term_j = pois_j(xt) Q(j+theta+1, ct) for the forward leg and
    //          e^-xt xt^(j+theta)/Gamma(j+theta+1) Q(j+1, ct) for the strike leg
    const std::int64_t mode = static_cast<std::int64_t>(xt);
    const double width = 10.0 * std::sqrt(xt + 10.0) + 30.0;
    const std::int64_t jlo = std::max<std::int64_t>(0, mode - static_cast<std::int64_t>(width));
    const std::int64_t jhi = mode + static_cast<std::int64_t>(width) + 1;

    // seeds at jlo
    const double lxt = std::log(xt);
    double pois = std::exp(-xt + jlo * lxt - std::lgamma(jlo + 1.0));
    double wgt = std::exp(-xt + (jlo + theta) * lxt - std::lgamma(jlo + theta + 1.0));
    double qf = detail::gamma_q(jlo + theta + 1.0, ct);
    double qk = detail::gamma_q(jlo + 1.0, ct);
    // density increments tau(s) = ct^s e^-ct / Gamma(s+1) for the Q recurrences
    const double lct = std::log(ct);
    double tau_f = std::exp((jlo + theta + 1.0) * lct - ct - std::lgamma(jlo + theta + 2.0));
    double tau_k = std::exp((jlo + 1.0) * lct - ct - std::lgamma(jlo + 2.0));

    double f_sum = 0.0, k_sum = 0.0;
    for (std::int64_t j = jlo; j <= jhi; ++j) {
        f_sum += pois * qf;
        k_sum += wgt * qk;
        const double tail = pois + wgt;
        if (j > mode && tail < 1e-14 * (f_sum + k_sum + 1e-300)) break;
        pois *= xt / (j + 1.0);
        wgt *= xt / (j + theta + 1.0);
        qf += tau_f;
        qk += tau_k;
        tau_f *= ct / (j + theta + 2.0);
        tau_k *= ct / (j + 2.0);
    }
    return f0 * f_sum - k * k_sum;
}

// ---------------------------------------------------------------------------
// Implied volatility: bracketed, vega-safeguarded Newton
// ---------------------------------------------------------------------------

namespace detail {

template <typename PriceFn, typename VegaFn>
double implied_vol_impl(double target, double lo_price, double hi_cap, PriceFn price,
                        VegaFn vega, double tol) {
    if (target < lo_price - tol || target > hi_cap + tol)
        throw std::domain_error("implied volatility: price outside no-arbitrage band");
    if (target <= lo_price + tol) return 0.0;

    double lo = 0.0, hi = 0.4;
    while (price(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e4) throw std::runtime_error("implied volatility: bracket expansion failed");
    }
    double sigma = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double p = price(sigma);
        const double diff = p - target;
        if (std::fabs(diff) < tol) return sigma;
        if (diff > 0.0) hi = sigma; else lo = sigma;
        const double v = vega(sigma);
        double next = v > 1e-14 ? sigma - diff / v : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sigma = next;
    }
    return sigma;
}

}  // namespace detail

inline double black_implied(double price, double f0, const OptionSpec& spec) {
    spec.validate();
    const double intrinsic =
        spec.df * std::max(spec.is_call ? f0 - spec.strike : spec.strike - f0, 0.0);
    const double cap = spec.is_call ? spec.df * f0 : spec.df * spec.strike;
    const double tol = 1e-12 * spec.df * f0;
    return detail::implied_vol_impl(
        price, intrinsic, cap, [&](double s) { return black_price(f0, spec, s); },
        [&](double s) { return black_vega(f0, spec, s); }, tol);
}

inline double bachelier_implied(double price, double f0, const OptionSpec& spec) {
    spec.validate();
    const double intrinsic =
        spec.df * std::max(spec.is_call ? f0 - spec.strike : spec.strike - f0, 0.0);
    const double tol = 1e-12 * spec.df * std::max(1.0, std::fabs(f0));
    return detail::implied_vol_impl(
        price, intrinsic, 1e300, [&](double s) { return bachelier_price(f0, spec, s); },
        [&](double s) {
            const double st = s * std::sqrt(spec.maturity);
            if (st <= 0.0) return 0.0;
            return spec.df * std::sqrt(spec.maturity) *
                   detail::norm_pdf((f0 - spec.strike) / st);
        },
        tol);
}

inline double cev_implied(double price, double f0, const OptionSpec& spec, double beta0) {
    spec.validate();
    const double intrinsic =
        spec.df * std::max(spec.is_call ? f0 - spec.strike : spec.strike - f0, 0.0);
    const double cap = spec.is_call ? spec.df * f0 : spec.df * spec.strike;
    const double tol = 1e-12 * spec.df * f0;
    return detail::implied_vol_impl(
        price, intrinsic, cap, [&](double s) { return cev_price(f0, spec, s, beta0); },
        [&](double s) {
            const double h = std::max(1e-6, 1e-6 * s);
            return (cev_price(f0, spec, s + h, beta0) - cev_price(f0, spec, s - h, beta0)) /
                   (2.0 * h);
        },
        tol);
}

// ---------------------------------------------------------------------------
// Time value from (B, C-tilde, D-tilde)
// ---------------------------------------------------------------------------

/// Exact time value of the Gaussian density ansatz: the closed form of
/// int_0^T e^{-B/t - Ct - Dt t} dt / (2 sqrt(2 pi t)). For Black inputs this
/// reproduces the Black time value to machine precision at every maturity.
inline double time_value_erfc(double B, double Ct, double Dt, double T) {
    if (!(B > 0.0) || !(T > 0.0)) throw std::domain_error("time_value_erfc: need B > 0, T > 0");
    const double pref = std::exp(-Ct) / (2.0 * std::sqrt(2.0 * M_PI));
    if (Dt > 1e-14) {
        const double sb = std::sqrt(B), sd = std::sqrt(Dt);
        const double x = std::sqrt(B / T), y = sd * std::sqrt(T);
        return pref * std::sqrt(M_PI) / (2.0 * sd) *
               (std::exp(-2.0 * sb * sd) * std::erfc(x - y) -
                std::exp(2.0 * sb * sd) * std::erfc(x + y));
    }
    // small or negative Dt: quadrature in u = sqrt(t); the integrand decays
    // super-exponentially at 0 and is smooth
    return 2.0 * pref *
           detail::gauss_integrate(
               [&](double u) { return std::exp(-B / (u * u) - Dt * u * u); }, 0.0,
               std::sqrt(T), 128);
}

/// The erfc-bracket form with the order-t expansion of the D-tilde factor;
/// differs from time_value_erfc by o(T^{5/2} e^{-B/T}).
inline double time_value_erfc_linear(double B, double Ct, double Dt, double T) {
    if (!(B > 0.0) || !(T > 0.0))
        throw std::domain_error("time_value_erfc_linear: need B > 0, T > 0");
    const double x = std::sqrt(B / T);
    const double e = std::exp(-B / T);
    const double ec = std::erfc(x);
    const double stpi = std::sqrt(T / M_PI);
    return std::exp(-Ct) / std::sqrt(2.0) *
           (stpi * e - std::sqrt(B) * ec -
            Dt / 3.0 * (stpi * (T - 2.0 * B) * e + 2.0 * std::pow(B, 1.5) * ec));
}

/// Leading short-maturity truncation of the time value.
inline double time_value_asymptotic(double B, double Ct, double Dt, double T) {
    if (!(B > 0.0) || !(T > 0.0))
        throw std::domain_error("time_value_asymptotic: need B > 0, T > 0");
    return std::pow(T, 1.5) / (2.0 * std::sqrt(2.0 * M_PI)) *
           std::exp(-B / T - Ct - std::log(B) - Dt * T - 1.5 * T / B);
}

}  // namespace sabrsmile
