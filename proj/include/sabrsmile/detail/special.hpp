// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace sabrsmile::detail {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x)/Gamma(s).
/// Series for x < s + 1, modified Lentz continued fraction otherwise.
/// The iteration cap is generous: near the transition diagonal with both
/// arguments around 1e10 (extreme CEV exponents) convergence takes O(sqrt x).
inline double gamma_q(double s, double x) {
    if (!(s > 0.0) || x < 0.0) throw std::domain_error("gamma_q: need s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(s);
    const long max_iter = 200000000L;
    if (x < s + 1.0) {
        // P(s,x) by series, Q = 1 - P
        double ap = s, sum = 1.0 / s, del = sum;
        for (long i = 0; i < max_iter; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16)
                return 1.0 - sum * std::exp(-x + s * std::log(x) - lg);
        }
        throw std::runtime_error("gamma_q: series did not converge");
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (long i = 1; i < max_iter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16)
            return h * std::exp(-x + s * std::log(x) - lg);
    }
    throw std::runtime_error("gamma_q: continued fraction did not converge");
}

inline double gamma_p(double s, double x) { return 1.0 - gamma_q(s, x); }

}  // namespace sabrsmile::detail
