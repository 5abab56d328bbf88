// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file expansion.hpp
 * @brief Implied-volatility expansion sigma(T) = sigma0 (1 + r1 T + r2 T^2)
 *        against Black, CEV(beta0) or Bachelier reference models, with the
 *        at-the-money limits taken by Richardson extrapolation in moneyness.
 *
 * All reported coefficients are in physical units: r1 per year, r2 per
 * year^2, sigma0 in the units of the chosen reference model.
 */

#include <array>
#include <cmath>
#include <stdexcept>

#include "sabrsmile/geometry.hpp"
#include "sabrsmile/kernel.hpp"

namespace sabrsmile {

enum class Proxy { black, cev, bachelier };

inline const char* proxy_name(Proxy p) {
    switch (p) {
        case Proxy::black: return "black";
        case Proxy::cev: return "cev";
        case Proxy::bachelier: return "bachelier";
    }
    return "?";
}

struct ExpansionConfig {
    double atm_threshold = 1e-4;     ///< |ln(K/F0)| below this takes the ATM limit
    double small_nu = 1e-6;          ///< below this, bypass the vol-of-vol rescaling
    double validity_bound = 1.0;     ///< flag results once nu^2 T exceeds this
    KernelOptions kernel;
};

// ---------------------------------------------------------------------------
// Reference-model quantities
// ---------------------------------------------------------------------------

/// Time-value exponent coefficients of a CEV reference model with exponent
/// beta0 and volatility sigma. beta0 == 1 gives the Black quantities,
/// beta0 == 0 the Bachelier ones.
struct CevReference {
    double beta0;
    double q0;   ///< transformed moneyness of the reference model
    double B0;
    double Ct0;
    double Dt0;
};

inline CevReference cev_reference(double k, double f0, double beta0, double sigma) {
    if (!(beta0 >= 0.0 && beta0 <= 1.0))
        throw std::domain_error("cev_reference: beta0 must be in [0, 1]");
    CevReference r;
    r.beta0 = beta0;
    r.q0 = q_transform(f0, k, beta0);
    r.B0 = r.q0 * r.q0 / (2.0 * sigma * sigma);
    r.Ct0 = -std::log(sigma) - 0.5 * beta0 * std::log(k * f0);
    r.Dt0 = beta0 * (2.0 - beta0) * sigma * sigma /
            (8.0 * std::pow(k * f0, 1.0 - beta0));
    return r;
}

// ---------------------------------------------------------------------------
// Order-by-order extraction from (B, C-tilde, D-tilde)
// ---------------------------------------------------------------------------

inline double sigma0_black(double B, double k, double f0) {
    if (!(B > 0.0)) throw std::domain_error("sigma0_black: ATM point, take the limit instead");
    return std::fabs(std::log(k / f0)) / std::sqrt(2.0 * B);
}

inline double sigma1_ratio_black(double B, double Ct, double sigma0, double k, double f0) {
    return -(Ct + std::log(sigma0 * std::sqrt(k * f0))) / (2.0 * B);
}

inline double sigma2_ratio_black(double B, double Dt, double sigma0, double r1) {
    return 1.5 * r1 * r1 - (Dt + 3.0 * r1 - sigma0 * sigma0 / 8.0) / (2.0 * B);
}

inline double sigma0_cev(double B, double q0) {
    if (!(B > 0.0)) throw std::domain_error("sigma0_cev: ATM point, take the limit instead");
    return std::fabs(q0) / std::sqrt(2.0 * B);
}

inline double sigma1_ratio_cev(double B, double Ct, double sigma0, double k, double f0,
                               double beta0) {
    return -(Ct + std::log(sigma0) + 0.5 * beta0 * std::log(k * f0)) / (2.0 * B);
}

inline double sigma2_ratio_cev(double B, double Dt, double sigma0, double r1, double k,
                               double f0, double beta0) {
    const double target = beta0 * (2.0 - beta0) * sigma0 * sigma0 /
                          (8.0 * std::pow(k * f0, 1.0 - beta0));
    return 1.5 * r1 * r1 - (Dt + 3.0 * r1 - target) / (2.0 * B);
}

// ---------------------------------------------------------------------------
// Expansion terms
// ---------------------------------------------------------------------------

struct ExpansionTerms {
    double sigma0 = 0.0;  ///< reference-model vol at T = 0 (physical units)
    double r1 = 0.0;      ///< sigma1/sigma0, per year
    double r2 = 0.0;      ///< sigma2/sigma0, per year^2
    bool atm_path = false;
    bool atm_converged = true;
    bool a1a_converged = true;
};

namespace detail_exp {

struct RawQuantities {
    double B, Ct, Dt;
    bool a1a_converged;
    double vol_restore;   // multiply extracted vol
    double time_restore;  // divide per-unit-time coefficients... r1_phys = r1_hat * time_restore
};

/// (B, C-tilde, D-tilde) of the model at strike k, plus the restore factors.
/// For nu below the degeneracy threshold the model is exactly CEV(alpha, beta)
/// and the exponent coefficients are written directly in physical units.
inline RawQuantities raw_quantities(const SabrParams& p, double k, const ExpansionConfig& cfg) {
    RawQuantities r;
    if (p.nu < cfg.small_nu) {
        const CevReference model = cev_reference(k, p.f0, p.beta, p.alpha);
        r.B = model.B0;
        r.Ct = model.Ct0;
        r.Dt = model.Dt0;
        r.a1a_converged = true;
        r.vol_restore = 1.0;
        r.time_restore = 1.0;
        return r;
    }
    const RescaledModel m = rescale(p);
    const KernelCoefficients kc = kernel_coefficients(m, k, cfg.kernel);
    r.B = kc.B;
    r.Ct = kc.Ctilde;
    r.Dt = kc.Dtilde;
    r.a1a_converged = kc.a1a_converged;
    r.vol_restore = m.vol_scale;
    r.time_restore = m.time_scale;
    return r;
}

inline ExpansionTerms extract(const RawQuantities& rq, const SabrParams& p, double k,
                              Proxy proxy, double beta0) {
    ExpansionTerms t;
    double s0, r1, r2;
    if (proxy == Proxy::black) {
        s0 = sigma0_black(rq.B, k, p.f0);
        r1 = sigma1_ratio_black(rq.B, rq.Ct, s0, k, p.f0);
        r2 = sigma2_ratio_black(rq.B, rq.Dt, s0, r1);
    } else {
        const double b0 = proxy == Proxy::bachelier ? 0.0 : beta0;
        const double q0 = q_transform(p.f0, k, b0);
        s0 = sigma0_cev(rq.B, q0);
        r1 = sigma1_ratio_cev(rq.B, rq.Ct, s0, k, p.f0, b0);
        r2 = sigma2_ratio_cev(rq.B, rq.Dt, s0, r1, k, p.f0, b0);
    }
    t.sigma0 = s0 * rq.vol_restore;
    t.r1 = r1 * rq.time_restore;
    t.r2 = r2 * rq.time_restore * rq.time_restore;
    t.a1a_converged = rq.a1a_converged;
    return t;
}

}  // namespace detail_exp

/// Expansion terms away from the money.
inline ExpansionTerms expand_terms_offatm(const SabrParams& p, double k, Proxy proxy,
                                          double beta0, const ExpansionConfig& cfg = {}) {
    p.validate();
    return detail_exp::extract(detail_exp::raw_quantities(p, k, cfg), p, k, proxy, beta0);
}

/// ATM limit by Richardson extrapolation over the moneyness ladder
/// {1e-2, 5e-3, 2.5e-3}: one elimination of the linear error, one of the
/// quadratic one. sigma0 and r1 have closed-form checks in the tests;
/// r2 is extrapolation-only.
inline ExpansionTerms atm_limits(const SabrParams& p, Proxy proxy, double beta0,
                                 const ExpansionConfig& cfg = {}, double side = 1.0) {
    static constexpr std::array<double, 3> ladder = {1e-2, 5e-3, 2.5e-3};
    std::array<ExpansionTerms, 3> t;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        t[i] = expand_terms_offatm(p, p.f0 * std::exp(side * ladder[i]), proxy, beta0, cfg);
    }
    auto rich = [](double f1, double f2, double f3) {
        const double g1 = 2.0 * f2 - f1;
        const double g2 = 2.0 * f3 - f2;
        return std::array<double, 2>{(4.0 * g2 - g1) / 3.0, g2};
    };
    ExpansionTerms out;
    out.atm_path = true;
    const auto s0 = rich(t[0].sigma0, t[1].sigma0, t[2].sigma0);
    const auto r1 = rich(t[0].r1, t[1].r1, t[2].r1);
    const auto r2 = rich(t[0].r2, t[1].r2, t[2].r2);
    out.sigma0 = s0[0];
    out.r1 = r1[0];
    out.r2 = r2[0];
    out.a1a_converged = t[0].a1a_converged && t[1].a1a_converged && t[2].a1a_converged;
    auto settled = [](const std::array<double, 2>& v, double scale) {
        return std::fabs(v[0] - v[1]) <= 1e-4 * std::max(scale, std::fabs(v[0]));
    };
    out.atm_converged = settled(s0, 1e-8) && settled(r1, 1e-6) && settled(r2, 1e-6);
    return out;
}

/// Expansion terms at any strike; |ln(K/F0)| below the ATM threshold routes
/// through the extrapolated limit.
inline ExpansionTerms expand_terms(const SabrParams& p, double k, Proxy proxy = Proxy::black,
                                   double beta0 = 1.0, const ExpansionConfig& cfg = {}) {
    p.validate();
    if (!(k > 0.0)) throw std::domain_error("expand_terms: strike must be positive");
    const double m = std::log(k / p.f0);
    if (std::fabs(m) < cfg.atm_threshold) {
        return atm_limits(p, proxy, beta0, cfg, m >= 0.0 ? 1.0 : -1.0);
    }
    return expand_terms_offatm(p, k, proxy, beta0, cfg);
}

// ---------------------------------------------------------------------------
// Assembled volatility
// ---------------------------------------------------------------------------

struct ExpansionResult {
    double sigma0 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double sigma_of_T = 0.0;
    Proxy proxy = Proxy::black;
    double beta0 = 1.0;
    int order = 2;
    bool valid = true;       ///< false once nu^2 T passes the bound or sigma <= 0
    bool atm_path = false;
    bool a1a_converged = true;
};

inline ExpansionResult sigma_at(const SabrParams& p, double k, double maturity, int order = 2,
                                Proxy proxy = Proxy::black, double beta0 = 1.0,
                                const ExpansionConfig& cfg = {}) {
    if (!(maturity > 0.0)) throw std::invalid_argument("sigma_at: maturity must be positive");
    if (order < 0 || order > 2) throw std::invalid_argument("sigma_at: order must be 0, 1 or 2");
    const ExpansionTerms t = expand_terms(p, k, proxy, beta0, cfg);
    ExpansionResult r;
    r.sigma0 = t.sigma0;
    r.r1 = t.r1;
    r.r2 = t.r2;
    r.proxy = proxy;
    r.beta0 = proxy == Proxy::black ? 1.0 : (proxy == Proxy::bachelier ? 0.0 : beta0);
    r.order = order;
    r.atm_path = t.atm_path;
    r.a1a_converged = t.a1a_converged;
    double f = 1.0;
    if (order >= 1) f += t.r1 * maturity;
    if (order >= 2) f += t.r2 * maturity * maturity;
    r.sigma_of_T = t.sigma0 * f;
    r.valid = p.nu * p.nu * maturity <= cfg.validity_bound && r.sigma_of_T > 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// ATM closed forms (checks and baselines)
// ---------------------------------------------------------------------------

/// ATM order-0 vol: the local volatility alpha F0^(beta-1).
inline double atm_sigma0(const SabrParams& p) {
    return p.alpha * std::pow(p.f0, p.beta - 1.0);
}

/// ATM sigma1/sigma0 of the lognormal expansion, per year.
inline double atm_sigma1_ratio(const SabrParams& p) {
    const double floc = std::pow(p.f0, p.beta - 1.0);
    return p.alpha * p.alpha * (1.0 - p.beta) * (1.0 - p.beta) * floc * floc / 24.0 +
           0.25 * p.rho * p.alpha * p.nu * p.beta * floc + p.nu * p.nu / 12.0 -
           p.rho * p.rho * p.nu * p.nu / 8.0;
}

/// ATM sigma1/sigma0 against the CEV reference with beta0 = beta: the local
/// volatility term drops out.
inline double atm_sigma1_ratio_cev(const SabrParams& p) {
    return 0.25 * p.rho * p.alpha * p.nu * p.beta * std::pow(p.f0, p.beta - 1.0) +
           p.nu * p.nu / 12.0 - p.rho * p.rho * p.nu * p.nu / 8.0;
}

// ---------------------------------------------------------------------------
// Generic proxy matching
// ---------------------------------------------------------------------------

/// Derivatives of a proxy model's exponent coefficients along a chosen
/// one-parameter path z(lambda), evaluated at lambda = 0 where B* == B.
struct ProxyDerivatives {
    double B;
    double Bp;    ///< dB*/dlambda
    double Bpp;   ///< d2B*/dlambda2
    double Ct;
    double Ctp;   ///< dCt*/dlambda
    double Dt;
};

struct ProxyExpansion {
    double lambda1;
    double lambda2;
};

/// Taylor coefficients of the proxy parameter path lambda(T) matching the
/// target expansion through order T.
inline ProxyExpansion proxy_lambda_expansion(double B, double Ct, double Dt,
                                             const ProxyDerivatives& px) {
    if (std::fabs(px.Bp) < 1e-300 * std::max(1.0, std::fabs(px.B)))
        throw std::domain_error("proxy_lambda_expansion: degenerate path direction (B*' == 0)");
    ProxyExpansion e;
    e.lambda1 = (Ct - px.Ct + std::log(B) - std::log(px.B)) / px.Bp;
    e.lambda2 = (Dt - px.Dt - e.lambda1 * px.Bp / px.B - e.lambda1 * px.Ctp -
                 0.5 * e.lambda1 * e.lambda1 * px.Bpp) /
                px.Bp;
    return e;
}

// ---------------------------------------------------------------------------
// HKLW baseline
// ---------------------------------------------------------------------------

/// The standard lognormal SABR approximation, used here only as a baseline.
inline double hklw_baseline(const SabrParams& p, double k, double maturity) {
    p.validate();
    if (!(k > 0.0)) throw std::domain_error("hklw_baseline: strike must be positive");
    const double om = 1.0 - p.beta;
    const double lfk = std::log(p.f0 / k);
    const double fkb = std::pow(p.f0 * k, 0.5 * om);
    const double tcoef = om * om * p.alpha * p.alpha / (24.0 * fkb * fkb) +
                         0.25 * p.rho * p.beta * p.nu * p.alpha / fkb +
                         (2.0 - 3.0 * p.rho * p.rho) * p.nu * p.nu / 24.0;
    if (std::fabs(lfk) < 1e-10) {
        return p.alpha / std::pow(p.f0, om) * (1.0 + tcoef * maturity);
    }
    const double denom =
        fkb * (1.0 + om * om * lfk * lfk / 24.0 + std::pow(om, 4) * std::pow(lfk, 4) / 1920.0);
    double zchi = 1.0;
    if (p.nu > 0.0) {
        const double z = p.nu / p.alpha * fkb * lfk;
        if (std::fabs(z) > 1e-8) {
            const double chi = std::log(
                (std::sqrt(1.0 - 2.0 * p.rho * z + z * z) + z - p.rho) / (1.0 - p.rho));
            zchi = z / chi;
        }
    }
    return p.alpha / denom * zchi * (1.0 + tcoef * maturity);
}

}  // namespace sabrsmile
