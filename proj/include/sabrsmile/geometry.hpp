// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file geometry.hpp
 * @brief Variable transforms and hyperbolic-plane geodesics for the SABR metric.
 *
 * After the CEV strike transform and a vol-of-vol rescaling, the SABR state
 * space carries the Poincare half-plane metric ds^2 = (dx^2 + dy^2)/y^2.
 * Everything in this header works in rescaled units (vol-of-vol == 1);
 * the inverse map is applied only when the final implied vol is assembled.
 */

#include <cmath>
#include <stdexcept>
#include <string>

namespace sabrsmile {

/// SABR model parameters: dF = V F^beta dW1, dV = nu V dW2 + kappa (vbar - V) dt,
/// corr(dW1,dW2) = rho, V(0) = alpha. kappa = 0 recovers plain SABR.
struct SabrParams {
    double f0;            ///< forward level, > 0
    double alpha;         ///< initial volatility factor, > 0
    double beta;          ///< CEV exponent in [0, 1]
    double nu;            ///< vol of vol, >= 0
    double rho;           ///< correlation in (-1, 1)
    double kappa = 0.0;   ///< mean-reversion speed, >= 0
    double vbar = 0.0;    ///< mean-reversion level, > 0 when kappa > 0

    void validate() const {
        if (!(f0 > 0.0)) throw std::invalid_argument("SabrParams: f0 must be positive");
        if (!(alpha > 0.0)) throw std::invalid_argument("SabrParams: alpha must be positive");
        if (!(beta >= 0.0 && beta <= 1.0))
            throw std::invalid_argument("SabrParams: beta must be in [0, 1]");
        if (!(nu >= 0.0)) throw std::invalid_argument("SabrParams: nu must be non-negative");
        if (!(rho > -1.0 && rho < 1.0))
            throw std::invalid_argument("SabrParams: rho must be in (-1, 1)");
        if (!(kappa >= 0.0)) throw std::invalid_argument("SabrParams: kappa must be non-negative");
        if (kappa > 0.0 && !(vbar > 0.0))
            throw std::invalid_argument("SabrParams: vbar must be positive when kappa > 0");
    }
};

/// Model in vol-of-vol == 1 units plus the record needed to undo the map:
/// vols are multiplied by vol_scale and maturities by time_scale on the way back.
struct RescaledModel {
    double f0;
    double beta;
    double rho;
    double alpha_hat;   ///< alpha / nu
    double kappa_hat;   ///< kappa / nu^2
    double vbar_hat;    ///< vbar / nu
    double vol_scale;   ///< nu:    sigma_physical = nu * sigma_hat
    double time_scale;  ///< nu^2:  t_hat = nu^2 * t
};

inline RescaledModel rescale(const SabrParams& p) {
    p.validate();
    if (!(p.nu > 0.0)) throw std::domain_error("rescale: nu must be positive");
    RescaledModel m;
    m.f0 = p.f0;
    m.beta = p.beta;
    m.rho = p.rho;
    m.alpha_hat = p.alpha / p.nu;
    m.kappa_hat = p.kappa / (p.nu * p.nu);
    m.vbar_hat = p.kappa > 0.0 ? p.vbar / p.nu : 0.0;
    m.vol_scale = p.nu;
    m.time_scale = p.nu * p.nu;
    return m;
}

/// Strike transform q = int_{f0}^{k} dF / F^beta.
inline double q_transform(double f0, double k, double beta) {
    if (!(f0 > 0.0) || !(k > 0.0))
        throw std::domain_error("q_transform: forward and strike must be positive");
    if (beta == 1.0) return std::log(k / f0);
    const double om = 1.0 - beta;
    return (std::pow(k, om) - std::pow(f0, om)) / om;
}

/// Geodesic distance on the half-plane, acosh(1 + delta) computed through
/// log1p so that nearly coincident points keep full relative precision.
inline double hyperbolic_distance(double x1, double y1, double x2, double y2) {
    if (!(y1 > 0.0) || !(y2 > 0.0))
        throw std::domain_error("hyperbolic_distance: points must lie in the upper half-plane");
    const double dx = x2 - x1, dy = y2 - y1;
    const double delta = (dx * dx + dy * dy) / (2.0 * y1 * y2);
    return std::log1p(delta + std::sqrt(delta * (delta + 2.0)));
}

/// Terminal volatility minimizing the distance to a given transformed strike q.
inline double vmin_volatility(double alpha_hat, double q, double rho) {
    return std::sqrt(alpha_hat * alpha_hat + 2.0 * rho * alpha_hat * q + q * q);
}

/// Minimal geodesic distance from (q=0, V=alpha_hat) to the strike line,
/// i.e. the distance at V = vmin. The log argument is rearranged to stay
/// cancellation-free for low strikes where q + rho*alpha_hat < 0.
inline double min_distance(double alpha_hat, double q, double rho) {
    const double vmin = vmin_volatility(alpha_hat, q, rho);
    const double m = q + rho * alpha_hat;
    const double num = m >= 0.0 ? vmin + m
                                : alpha_hat * alpha_hat * (1.0 - rho * rho) / (vmin - m);
    return std::fabs(std::log(num / ((1.0 + rho) * alpha_hat)));
}

/// Van Vleck-Morette determinant on the hyperbolic plane, d / sinh(d).
inline double van_vleck(double d) {
    if (d < 0.0) throw std::domain_error("van_vleck: distance must be non-negative");
    if (d < 1e-4) {
        const double d2 = d * d;
        return 1.0 - d2 / 6.0 + 7.0 * d2 * d2 / 360.0;
    }
    return d / std::sinh(d);
}

/// Geodesic through two half-plane points: a semicircle centered at (X, 0)
/// with radius R, parameterized by t = tan(theta/2); arclength is d ln t.
/// Vertical geodesics (x1 == x2 up to tolerance) carry no circle data.
struct GeodesicCircle {
    double X = 0.0;
    double R = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    bool vertical = false;
};

inline bool is_vertical(double x1, double x2) {
    return std::fabs(x2 - x1) <
           1e-12 * std::max({1.0, std::fabs(x1), std::fabs(x2)});
}

inline GeodesicCircle geodesic_circle(double x1, double y1, double x2, double y2) {
    if (!(y1 > 0.0) || !(y2 > 0.0))
        throw std::domain_error("geodesic_circle: points must lie in the upper half-plane");
    GeodesicCircle c;
    if (is_vertical(x1, x2)) {
        c.vertical = true;
        return c;
    }
    c.X = (x2 * x2 - x1 * x1 + y2 * y2 - y1 * y1) / (2.0 * (x2 - x1));
    c.R = std::hypot(y1, x1 - c.X);
    c.t1 = std::sqrt((c.R - x1 + c.X) / (c.R + x1 - c.X));
    c.t2 = std::sqrt((c.R - x2 + c.X) / (c.R + x2 - c.X));
    return c;
}

/// Geodesic data from the spot state (q=0, V=alpha_hat) to (q, V), in
/// rescaled half-plane coordinates x = (q - rho V)/sqrt(1-rho^2), y = V.
struct GeodesicData {
    double q = 0.0;
    double x1 = 0.0, y1 = 0.0;
    double x2 = 0.0, y2 = 0.0;
    double X = 0.0, R = 0.0;
    double t1 = 0.0, t2 = 0.0;
    double d = 0.0;
    double vmin = 0.0;
    bool vertical = false;
};

inline GeodesicData geodesic_to(double alpha_hat, double rho, double q, double v) {
    if (!(alpha_hat > 0.0)) throw std::domain_error("geodesic_to: alpha_hat must be positive");
    const double s = std::sqrt(1.0 - rho * rho);
    GeodesicData g;
    g.q = q;
    g.x1 = -rho * alpha_hat / s;
    g.y1 = alpha_hat;
    g.x2 = (q - rho * v) / s;
    g.y2 = v;
    g.d = hyperbolic_distance(g.x1, g.y1, g.x2, g.y2);
    g.vmin = vmin_volatility(alpha_hat, q, rho);
    const GeodesicCircle c = geodesic_circle(g.x1, g.y1, g.x2, g.y2);
    g.vertical = c.vertical;
    g.X = c.X;
    g.R = c.R;
    g.t1 = c.t1;
    g.t2 = c.t2;
    return g;
}

/// Geodesic to the distance-minimizing endpoint (q, V_min).
inline GeodesicData geodesic_from_strike(double alpha_hat, double rho, double q) {
    return geodesic_to(alpha_hat, rho, q, vmin_volatility(alpha_hat, q, rho));
}

}  // namespace sabrsmile
