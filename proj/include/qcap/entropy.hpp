#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qcap/error.hpp"

namespace qcap {

enum class Units { bits, nats };

inline double to_units(double nats, Units units) {
    return units == Units::bits ? nats / std::numbers::ln2 : nats;
}

inline const char* units_name(Units units) { return units == Units::bits ? "bits" : "nats"; }

/// Entropy of a thermal state with mean photon number x, in nats:
/// (1+x) ln(1+x) - x ln x.
inline double g_nats(double x) {
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("g_nats: mean photon number must be finite and >= 0, got " + std::to_string(x));
    if (x == 0.0)
        return 0.0;
    // x ln x -> 0; below 1e-300 the log1p term already dominates to full precision.
    if (x < 1e-300)
        return x;
    return (1.0 + x) * std::log1p(x) - x * std::log(x);
}

/// Inverse of g_nats by bisection on a doubling bracket.
inline double g_inv(double s) {
    if (!std::isfinite(s) || s < 0.0)
        throw DomainError("g_inv: entropy must be finite and >= 0, got " + std::to_string(s));
    if (s == 0.0)
        return 0.0;

    double lo = 0.0;
    double hi = 1.0;
    while (g_nats(hi) < s) {
        lo = hi;
        hi *= 2.0;
    }
    // Absolute tolerance on x is not enough for large x; stop on the value tolerance too.
    for (int iter = 0; iter < 2000 && hi - lo > 1e-15 * (1.0 + hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g_nats(mid);
        if (std::abs(gm - s) < 1e-13)
            return mid;
        (gm < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace qcap
