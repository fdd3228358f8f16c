#ifndef OSTRO_O2_HPP
#define OSTRO_O2_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "ostro/rational.hpp"

namespace ostro {

// Digits of the alternating series x = 1/q1 - 1/q2 + 1/q3 - ... with the
// growth constraint q_{k+1} >= q_k(q_k+1).  `terminated` means the division
// scheme reached a zero remainder, so the finite sum equals x exactly.
struct O2Digits {
    std::vector<Integer> q;
    bool terminated = false;

    std::size_t size() const { return q.size(); }
};

// Difference form: d1 = q1, d_{k+1} = q_{k+1} - q_k(q_k+1) + 1.  Every d_k
// ranges freely over the positive integers, independently of the others.
struct BarO2Digits {
    std::vector<Integer> d;
    bool terminated = false;

    std::size_t size() const { return d.size(); }
};

// Raw digits reconstructed from a difference-form prefix:
// c1 = d1, c_{i+1} = c_i(c_i+1) - 1 + d_{i+1}.  Grows doubly exponentially,
// c_k >= 2^(2^(k-2)) for k >= 2.
struct CompanionSequence {
    std::vector<Integer> c;

    const Integer& last() const { return c.back(); }
    std::size_t size() const { return c.size(); }
};

// The set of reals whose expansion starts with `base`; a closed interval.
struct Cylinder {
    BarO2Digits base;
    CompanionSequence companions;
    int rank = 0;
    bool odd_rank = false;
    Rational inf;
    Rational sup;

    Rational length() const { return sup - inf; }
};

// Throw InvalidDigits unless the growth constraint and positivity hold.
void validate(const O2Digits& digits);
// Throw InvalidDigits unless every difference digit is >= 1.
void validate(const BarO2Digits& digits);

// Ostrogradsky-Remez division scheme.  Requires 0 < x < 1.  Rational inputs
// always terminate given enough terms; if `max_terms` is hit first the result
// is a valid non-terminated prefix.
O2Digits remez_expand(const Rational& x, int max_terms);

// Exact alternating partial sum over the first n digits.
Rational evaluate_o2(const O2Digits& digits, std::size_t n);
Rational evaluate_o2(const O2Digits& digits); // all digits

// Digit-form conversions; exact inverses of each other on valid input.
BarO2Digits o2_to_bar(const O2Digits& digits);
std::pair<O2Digits, CompanionSequence> bar_to_o2(const BarO2Digits& digits);

CompanionSequence companion_sequence(const BarO2Digits& digits);

// The closed interval of all reals whose expansion extends `base`.
// Endpoints follow the rank-parity formulas; length is 1/(c_n(c_n+1)).
Cylinder cylinder_interval(const BarO2Digits& base);

// |child j of base| / |base|, exactly C/((C+j-1)(C+j)) with C = c_n(c_n+1).
Rational child_ratio(const BarO2Digits& base, const Integer& j);

// One-sided shift: drops the first digit.
BarO2Digits shift(const BarO2Digits& digits);

// N_i(x, n): occurrences of digit i among the first n difference digits.
std::size_t digit_count(const BarO2Digits& digits, const Integer& i, std::size_t n);

// The second finite representation of a rational: the last digit a+1 expands
// into the pair (a, a(a+1)).  Only terminated expansions have one.
O2Digits alternate_representation(const O2Digits& digits);

// --- cylinder tree frames -------------------------------------------------
//
// Lightweight traversal state for walking the cylinder tree without
// recomputing companion sequences: only the interval, the value
// C = c_n(c_n+1), and the rank parity are needed.  The unit interval is the
// rank-0 frame with C = 1.

struct CylinderFrame {
    Rational a;
    Rational b;
    Integer big_c; // c_n(c_n+1); 1 at the root
    bool odd = false;
    int rank = 0;

    static CylinderFrame root();
    // Frame of the child with difference digit j >= 1.
    CylinderFrame child(const Integer& j) const;
    Rational length() const { return b - a; }
};

CylinderFrame to_frame(const Cylinder& cyl);

} // namespace ostro

#endif
