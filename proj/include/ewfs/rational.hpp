#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ewfs {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::int64_t kMaxSnapDenominator = 1'000'000;
inline constexpr double kSnapTolerance = 1e-9;

// Best rational approximation p/q of x with 0 < q <= max_den (continued
// fractions plus the final semiconvergent).
inline Rational best_rational(double x, std::int64_t max_den = kMaxSnapDenominator) {
    const bool neg = x < 0;
    double r = std::fabs(x);
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double fa = std::floor(r);
        if (fa > 9e15) break;
        const auto a = static_cast<std::int64_t>(fa);
        const std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) {
            const std::int64_t k = q1 == 0 ? 0 : (max_den - q0) / q1;
            const std::int64_t ps = p0 + k * p1, qs = q0 + k * q1;
            const double ax = std::fabs(x);
            if (q1 == 0 || std::fabs(ax - static_cast<double>(ps) / static_cast<double>(qs)) <
                               std::fabs(ax - static_cast<double>(p1) / static_cast<double>(q1))) {
                p1 = ps;
                q1 = qs;
            }
            break;
        }
        const std::int64_t p2 = a * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = r - fa;
        if (frac < 1e-18) break;
        r = 1.0 / frac;
    }
    Rational out(p1, q1);
    return neg ? Rational(-out) : out;
}

// Nearest rational with denominator <= max_den, if it lies within tol of x.
inline std::optional<Rational> snap(double x, std::int64_t max_den = kMaxSnapDenominator,
                                    double tol = kSnapTolerance) {
    if (!std::isfinite(x)) return std::nullopt;
    Rational q = best_rational(x, max_den);
    if (std::fabs(static_cast<double>(q) - x) > tol) return std::nullopt;
    return q;
}

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace ewfs
