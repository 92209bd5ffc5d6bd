#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace convote {

// All analytic computation runs on arbitrary-precision rationals; doubles
// appear only in the power-iteration verifier, the walk frequencies, and
// display formatting.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using RationalMatrix = std::vector<std::vector<Rational>>;

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

/// "5/11", or just "5" when the denominator is 1.
inline std::string to_fraction_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1)
        s += "/" + denominator(q).str();
    return s;
}

/// Decimal rendering with 12 significant digits.
inline std::string to_decimal_string(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", to_double(q));
    return buf;
}

} // namespace convote
