#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubecorr {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

inline bigint pow2(unsigned k) { return bigint(1) << k; }

// log2|v| for v != 0, accurate even when v does not fit in a double
inline double log2_abs(const bigint& v) {
    if (v.is_zero()) throw std::invalid_argument("log2_abs: zero argument");
    bigint a = v < 0 ? bigint(-v) : v;
    unsigned bits = boost::multiprecision::msb(a);
    if (bits <= 62) return std::log2(a.convert_to<double>());
    bigint top = a >> (bits - 62);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 62);
}

// rational -> double that survives numerators and denominators with thousands
// of bits; converting the parts separately would overflow to inf/inf
inline double to_double(const bigrat& q) {
    const bigint num = boost::multiprecision::numerator(q);
    const bigint den = boost::multiprecision::denominator(q);
    if (num.is_zero()) return 0.0;
    bigint a = num < 0 ? bigint(-num) : num;
    long ea = static_cast<long>(boost::multiprecision::msb(a));
    long eb = static_cast<long>(boost::multiprecision::msb(den));
    long shift = eb - ea + 64;
    if (shift > 0) a <<= shift;
    else if (shift < 0) a >>= -shift;
    double scaled = bigint(a / den).convert_to<double>();
    double r = std::ldexp(scaled, static_cast<int>(-shift));
    return num < 0 ? -r : r;
}

inline double to_double(const bigint& v) {
    return v.convert_to<double>();
}

}
