#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace qinterp {

// All probability and expectation arithmetic in the exact engines runs on
// arbitrary-precision rationals; doubles appear only in the LP solver and
// the amplitude simulator.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders a rational as "num/den" (denominator always present: 0 -> "0/1").
inline std::string to_fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Best rational approximation of x by continued fractions, restricted to
/// denominators <= max_den.  Returns nullopt when no such fraction lands
/// within tol of x.
inline std::optional<Rational> rationalize(double x, std::uint64_t max_den = 1'000'000,
                                           double tol = 1e-9) {
    if (!std::isfinite(x)) return std::nullopt;
    const bool negative = x < 0;
    const double v = std::fabs(x);

    // Convergents p/q of the continued fraction of v.
    std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int iter = 0; iter < 64; ++iter) {
        const double floor_part = std::floor(frac);
        if (floor_part > static_cast<double>(max_den)) break;
        const auto a = static_cast<std::uint64_t>(floor_part);
        const std::uint64_t p2 = a * p1 + p0;
        const std::uint64_t q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::fabs(approx - v) <= tol) {
            Rational r{BigInt(p1), BigInt(q1)};
            return negative ? Rational(-r) : r;
        }
        const double rem = frac - floor_part;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    return std::nullopt;
}

} // namespace qinterp
