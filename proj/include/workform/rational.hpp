#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace workform {

// Exact arbitrary-precision rational. Homotopy integration produces
// denominators like (|alpha| + k) per term; these must never overflow.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denom(r) == 1; }

/// r^e for integer e; requires r != 0 when e < 0.
inline Rational rational_pow(const Rational& base, std::int64_t e) {
    if (e == 0) return Rational(1);
    Rational b = base;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-(e + 1)) + 1 : static_cast<std::uint64_t>(e);
    Rational acc(1);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    if (e < 0) acc = Rational(1) / acc;
    return acc;
}

/// "p" for integers, "p/q" otherwise; round-trips through the parser.
inline std::string rational_to_string(const Rational& r) {
    std::string s = numer(r).str();
    if (!is_integer(r)) s += "/" + denom(r).str();
    return s;
}

}  // namespace workform
