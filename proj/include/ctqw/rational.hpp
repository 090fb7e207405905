#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "ctqw/errors.hpp"

namespace ctqw {

struct Fraction {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Best continued-fraction convergent p/q of x >= 0 with q <= max_den.
/// Stops early once |x - p/q| <= tol * max(x, 1).
inline Fraction rational_approximation(double x, long long max_den, double tol = 1e-12) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidParameter("rational_approximation: need finite x >= 0");
    if (max_den < 1) throw InvalidParameter("rational_approximation: denominator bound must be positive");
    const double scale = std::max(x, 1.0);
    long long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
    long long p1 = static_cast<long long>(std::floor(x));
    long long q1 = 1;
    long double y = static_cast<long double>(x) - std::floor(x);
    while (true) {
        if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol * scale) break;
        if (y <= 1e-18L) break;
        y = 1.0L / y;
        const long double a = std::floor(y);
        if (a > 4e18L) break;
        y -= a;
        const long long ai = static_cast<long long>(a);
        // overflow-safe next convergent
        if (ai != 0 && (p1 > (std::numeric_limits<long long>::max() - p0) / ai ||
                        q1 > (std::numeric_limits<long long>::max() - q0) / ai))
            break;
        const long long p2 = ai * p1 + p0;
        const long long q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return Fraction{p1, q1};
}

/// lcm with an explicit cap; returns 0 when the result would exceed it.
inline long long capped_lcm(long long a, long long b, long long cap) {
    if (a == 0 || b == 0) return 0;
    const long long g = std::gcd(a, b);
    const long long half = a / g;
    if (half > cap / b) return 0;
    return half * b;
}

}  // namespace ctqw
