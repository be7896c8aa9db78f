#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cmatch {

// Exact arbitrary-precision rational.  Flow values are split by predecessor
// counts round after round, so denominators grow multiplicatively; the
// discard rule compares against 1 exactly, which rules out floating point.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rational(long long num, long long den = 1) { return Rational(num, den); }

inline std::string to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Bit length of a rational's wire encoding: numerator and denominator as
// length-prefixed magnitudes.  Used for message accounting only.
inline int rational_bits(const Rational& r) {
    auto bits = [](const BigInt& v) {
        return v == 0 ? 1 : static_cast<int>(msb(v)) + 1;
    };
    return bits(numerator(r)) + bits(denominator(r)) + 16;
}

}  // namespace cmatch
