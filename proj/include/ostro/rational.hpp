#ifndef OSTRO_RATIONAL_HPP
#define OSTRO_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ostro/errors.hpp"

namespace ostro {

// All exact computation in the library runs on these two types.  mpq_class
// keeps values canonical (reduced, positive denominator) through arithmetic,
// which is exactly the ExactRational contract.
using Integer  = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (sgn(den) <= 0 && sgn(num) != 0 && sgn(den) == 0)
        throw DomainError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den) {
    return make_rational(Integer(num), Integer(den));
}

// Reciprocal of a positive integer, the workhorse of every series here.
inline Rational unit_fraction(const Integer& den) {
    return make_rational(Integer(1), den);
}

// floor(p/q) for a rational, exact.
inline Integer floor_rational(const Rational& x) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline Integer ceil_rational(const Rational& x) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

// floor(sqrt(n)) for n >= 0; a certified lower bound on the real square root.
inline Integer isqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// base^exp for big-integer base, machine exponent.
inline Integer ipow(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Integer pow2(unsigned long exp) { return ipow(Integer(2), exp); }

// x^exp for rational base, machine exponent.
inline Rational rpow(const Rational& x, unsigned long exp) {
    return make_rational(ipow(x.get_num(), exp), ipow(x.get_den(), exp));
}

// Parses "p/q", "p", or a plain decimal literal ("0.4" -> 2/5), all exact.
Rational parse_rational(const std::string& text);

// Conservative decimal-grid rounding for certified bounds.  round_down keeps
// strictly positive values strictly positive (escalating the grid as needed),
// so a rounded lower bound certifies exactly what the exact one did.
Rational round_down(const Rational& x, int digits = 18);
Rational round_up(const Rational& x, int digits = 18);

// Renders as "p/q" ("p" when the denominator is 1).
std::string to_fraction_string(const Rational& x);

// Fits-in-uint64 check used by the JSON layer (digit arrays are numbers when
// every entry fits, strings otherwise).
inline std::optional<std::uint64_t> to_u64(const Integer& n) {
    if (sgn(n) < 0 || !n.fits_ulong_p()) return std::nullopt;
    return static_cast<std::uint64_t>(n.get_ui());
}

// Exact sum of many rationals with unrelated denominators.  Sequential +=
// is quadratic in the accumulated size; the binary-counter merge keeps the
// total cost near-linear.  Order-independent result (exact addition).
class RationalSum {
public:
    void add(const Rational& v) {
        Rational carry = v;
        std::size_t i = 0;
        for (; i < slots_.size(); ++i) {
            if (!filled_[i]) break;
            carry += slots_[i];
            filled_[i] = false;
        }
        if (i == slots_.size()) {
            slots_.push_back(carry);
            filled_.push_back(true);
        } else {
            slots_[i] = carry;
            filled_[i] = true;
        }
    }

    Rational total() const {
        Rational sum(0);
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (filled_[i]) sum += slots_[i];
        return sum;
    }

private:
    std::vector<Rational> slots_;
    std::vector<bool> filled_;
};

} // namespace ostro

#endif
