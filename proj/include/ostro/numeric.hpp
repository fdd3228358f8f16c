#ifndef OSTRO_NUMERIC_HPP
#define OSTRO_NUMERIC_HPP

#include <string>

#include "ostro/rational.hpp"

namespace ostro {

// Exact rational bracket around a real value.  Every transcendental quantity
// in the library crosses into the exact world only through one of these, with
// outward (conservative) rounding on both ends.
struct RationalInterval {
    Rational lo;
    Rational hi;

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    Rational width() const { return hi - lo; }
};

// Decimal rendering with its stated precision; never fed back into exact
// pipelines.
struct Decimal {
    std::string text;
    int digits = 0;
};

// Default precision for reported decimals (spec of the companion stats).
inline constexpr int kDefaultDecimalDigits = 64;

// pi and e bracketed to at least `bits` of working precision.
RationalInterval pi_interval(int bits = 128);
RationalInterval e_interval(int bits = 128);

// Natural log of a positive rational, outward-rounded.
RationalInterval ln_interval(const Rational& x, int bits = 192);

// (ln y) / (ln 2) for positive rational y, outward-rounded.  This is the shape
// of the continued-fraction digit-frequency constant.
RationalInterval log2_ratio_interval(const Rational& y, int bits = 192);

// 2^e for rational exponent e (possibly fractional), outward-rounded.
RationalInterval pow2_interval(const Rational& exponent, int bits = 192);

// n-th root of a positive integer, outward-rounded.
RationalInterval nth_root_interval(const Integer& value, unsigned long n, int bits = 192);

// Round-to-nearest decimal strings of the requested length.
Decimal to_decimal(const Rational& x, int digits = kDefaultDecimalDigits);
Decimal nth_root_decimal(const Integer& value, unsigned long n, int digits = kDefaultDecimalDigits);

// Convenience: midpoint decimal of an interval (for report fields that are
// estimates, labeled with their precision).
Decimal to_decimal(const RationalInterval& iv, int digits = kDefaultDecimalDigits);

} // namespace ostro

#endif
