// SPDX-License-Identifier: Apache-2.0
#include "sabrsmile/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace sabrsmile;

namespace {

TEST(QTransform, IdentityAtForward) {
    EXPECT_DOUBLE_EQ(q_transform(4.0, 4.0, 0.7), 0.0);
}

TEST(QTransform, LogDefinitionAtBetaOne) {
    EXPECT_NEAR(q_transform(1.0, std::exp(1.0), 1.0), 1.0, 1e-15);
}

TEST(QTransform, MatchesQuadrature) {
    const double q = q_transform(4.0, 5.0, 0.7);
    const double num =
        oracles::integrate([](double f) { return std::pow(f, -0.7); }, 4.0, 5.0, 1e-14);
    EXPECT_NEAR(q, num, 1e-12);
    EXPECT_NEAR(q, 0.34980010060788136, 1e-14);
}

TEST(QTransform, SignFollowsMoneyness) {
    EXPECT_GT(q_transform(4.0, 5.0, 0.3), 0.0);
    EXPECT_LT(q_transform(4.0, 3.0, 0.3), 0.0);
    EXPECT_THROW(q_transform(4.0, -1.0, 0.3), std::domain_error);
}

TEST(Rescale, DividesAlphaByNu) {
    SabrParams p{4.0, 0.3, 0.7, 0.4, -0.5};
    const RescaledModel m = rescale(p);
    EXPECT_DOUBLE_EQ(m.alpha_hat, 0.75);
    EXPECT_DOUBLE_EQ(m.time_scale, 0.16);
    EXPECT_DOUBLE_EQ(m.vol_scale, 0.4);
}

TEST(Rescale, NuOneIsFixedPoint) {
    SabrParams p{4.0, 0.3, 0.7, 1.0, -0.5};
    const RescaledModel m = rescale(p);
    EXPECT_DOUBLE_EQ(m.alpha_hat, 0.3);
    EXPECT_DOUBLE_EQ(m.time_scale, 1.0);
}

TEST(Rescale, RoundTripPreservesAtmVol) {
    // order-0 ATM vol alpha F0^(beta-1) is physical: alpha_hat * vol_scale
    // must reproduce alpha for any nu
    for (double nu : {0.1, 0.4, 2.0}) {
        SabrParams p{4.0, 0.3, 0.7, nu, -0.5};
        const RescaledModel m = rescale(p);
        EXPECT_NEAR(m.alpha_hat * m.vol_scale * std::pow(p.f0, p.beta - 1.0),
                    p.alpha * std::pow(p.f0, p.beta - 1.0), 1e-15);
    }
}

TEST(HyperbolicDistance, CoincidentPoints) {
    EXPECT_DOUBLE_EQ(hyperbolic_distance(0.0, 1.0, 0.0, 1.0), 0.0);
}

TEST(HyperbolicDistance, VerticalGeodesic) {
    EXPECT_NEAR(hyperbolic_distance(0.0, 1.0, 0.0, std::exp(1.0)), 1.0, 1e-14);
}

TEST(HyperbolicDistance, UnitHorizontalOffset) {
    EXPECT_NEAR(hyperbolic_distance(0.0, 1.0, 1.0, 1.0), 0.9624236501192069, 1e-14);
}

TEST(HyperbolicDistance, SymmetryAndTriangleInequality) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double x1 = ux(rng), y1 = uy(rng);
        const double x2 = ux(rng), y2 = uy(rng);
        const double x3 = ux(rng), y3 = uy(rng);
        const double d12 = hyperbolic_distance(x1, y1, x2, y2);
        EXPECT_NEAR(d12, hyperbolic_distance(x2, y2, x1, y1), 1e-14);
        const double d13 = hyperbolic_distance(x1, y1, x3, y3);
        const double d23 = hyperbolic_distance(x2, y2, x3, y3);
        EXPECT_LE(d13, d12 + d23 + 1e-10);
    }
}

TEST(Vmin, AtTheMoney) {
    EXPECT_DOUBLE_EQ(vmin_volatility(0.75, 0.0, -0.5), 0.75);
}

TEST(Vmin, PythagorasAtZeroCorrelation) {
    EXPECT_DOUBLE_EQ(vmin_volatility(3.0, 4.0, 0.0), 5.0);
}

TEST(Vmin, MinimizesDistanceOverVolatilityScan) {
    const double ah = 0.75, rho = -0.5;
    const double q = q_transform(4.0, 5.0, 0.7);
    auto dist = [&](double v) {
        const double s = std::sqrt(1.0 - rho * rho);
        return hyperbolic_distance(-rho * ah / s, ah, (q - rho * v) / s, v);
    };
    const double v_scan = oracles::grid_argmin(dist, 0.05, 5.0);
    EXPECT_NEAR(vmin_volatility(ah, q, rho), v_scan, 1e-7);
}

TEST(MinDistance, ZeroAtForward) {
    EXPECT_DOUBLE_EQ(min_distance(0.75, 0.0, -0.5), 0.0);
}

TEST(MinDistance, ClosedFormsAgree) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.05, 3.0), uq(-2.0, 2.0), ur(-0.9, 0.9);
    for (int i = 0; i < 500; ++i) {
        const double ah = ua(rng), q = uq(rng), rho = ur(rng);
        const double d_ln = min_distance(ah, q, rho);
        const double vmin = vmin_volatility(ah, q, rho);
        const double arg = (vmin - rho * q - rho * rho * ah) / ((1.0 - rho * rho) * ah);
        const double d_acosh = std::acosh(std::max(1.0, arg));
        EXPECT_NEAR(d_ln, d_acosh, 1e-12 * std::max(1.0, d_ln));
    }
}

TEST(MinDistance, MatchesEndpointDistanceAtVmin) {
    const double ah = 0.75, rho = -0.5;
    const double q = q_transform(4.0, 5.0, 0.7);
    const double vmin = vmin_volatility(ah, q, rho);
    const double s = std::sqrt(1.0 - rho * rho);
    const double direct = hyperbolic_distance(-rho * ah / s, ah, (q - rho * vmin) / s, vmin);
    EXPECT_NEAR(min_distance(ah, q, rho), direct, 1e-13);
    // and no scanned volatility does better
    for (int i = 1; i <= 200; ++i) {
        const double v = 0.05 + (3.0 - 0.05) * i / 200.0;
        const double d = hyperbolic_distance(-rho * ah / s, ah, (q - rho * v) / s, v);
        EXPECT_LE(min_distance(ah, q, rho), d + 1e-10);
    }
}

TEST(GeodesicCircle, VerticalFlag) {
    const GeodesicCircle c = geodesic_circle(1.0, 0.5, 1.0, 2.0);
    EXPECT_TRUE(c.vertical);
}

TEST(GeodesicCircle, SymmetricChord) {
    const GeodesicCircle c = geodesic_circle(-1.0, 1.0, 1.0, 1.0);
    EXPECT_FALSE(c.vertical);
    EXPECT_NEAR(c.X, 0.0, 1e-14);
    EXPECT_NEAR(c.R, std::sqrt(2.0), 1e-14);
}

TEST(GeodesicCircle, EndpointsOnCircleAndArcLength) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double x1 = ux(rng), y1 = uy(rng);
        const double x2 = ux(rng), y2 = uy(rng);
        if (is_vertical(x1, x2)) continue;
        const GeodesicCircle c = geodesic_circle(x1, y1, x2, y2);
        const double r1 = (x1 - c.X) * (x1 - c.X) + y1 * y1;
        const double r2 = (x2 - c.X) * (x2 - c.X) + y2 * y2;
        EXPECT_NEAR(r1, c.R * c.R, 1e-10 * c.R * c.R);
        EXPECT_NEAR(r2, c.R * c.R, 1e-10 * c.R * c.R);
        const double d = hyperbolic_distance(x1, y1, x2, y2);
        EXPECT_NEAR(std::fabs(std::log(c.t2 / c.t1)), d, 1e-10 * std::max(1.0, d));
    }
}

TEST(VanVleck, LimitsAndMonotonicity) {
    EXPECT_DOUBLE_EQ(van_vleck(0.0), 1.0);
    EXPECT_NEAR(van_vleck(1.0), 0.8509181282393216, 1e-14);
    double prev = van_vleck(0.0);
    for (int i = 1; i <= 100; ++i) {
        const double d = 0.08 * i;
        const double cur = van_vleck(d);
        EXPECT_LT(cur, prev);
        EXPECT_GT(cur, 0.0);
        EXPECT_LE(cur, 1.0);
        prev = cur;
    }
    // series / closed form agree at the switch point
    EXPECT_NEAR(van_vleck(9.9e-5), 9.9e-5 / std::sinh(9.9e-5), 1e-15);
}

TEST(GeodesicData, BuildsConsistentState) {
    const double ah = 0.75, rho = -0.5;
    const double q = q_transform(4.0, 5.0, 0.7);
    const GeodesicData g = geodesic_from_strike(ah, rho, q);
    EXPECT_FALSE(g.vertical);
    EXPECT_NEAR(g.vmin, vmin_volatility(ah, q, rho), 1e-15);
    EXPECT_NEAR(g.d, min_distance(ah, q, rho), 1e-12);
    EXPECT_NEAR(std::fabs(std::log(g.t2 / g.t1)), g.d, 1e-12);
}

}  // namespace
