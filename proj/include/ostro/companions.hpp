#ifndef OSTRO_COMPANIONS_HPP
#define OSTRO_COMPANIONS_HPP

#include <cstddef>
#include <vector>

#include "ostro/numeric.hpp"
#include "ostro/o2.hpp"
#include "ostro/rational.hpp"

namespace ostro {

// Continued fraction partial quotients of x = [0; a1, a2, ...].
struct CFDigits {
    std::vector<Integer> a;
    bool terminated = false;

    std::size_t size() const { return a.size(); }
};

// Ostrogradsky-Pierce digits: x = 1/q1 - 1/(q1 q2) + ..., q strictly
// increasing; g is the difference form g1 = q1, g_{k+1} = q_{k+1} - q_k.
struct PierceDigits {
    std::vector<Integer> q;
    std::vector<Integer> g;
    bool terminated = false;

    std::size_t size() const { return q.size(); }
};

CFDigits cf_expand(const Rational& x, int max_terms);
Rational cf_evaluate(const CFDigits& digits, std::size_t n);
Rational cf_evaluate(const CFDigits& digits);

// Convergents p_k/q_k for k = 1..n.
std::vector<std::pair<Integer, Integer>> cf_convergents(const CFDigits& digits);

// Closed interval of reals whose continued fraction starts with the given
// partial quotients.
struct Interval {
    Rational lo;
    Rational hi;
    Rational length() const { return hi - lo; }
};
Interval cf_cylinder(const std::vector<Integer>& prefix);

// |cf cylinder child i| / |parent| computed exactly from the convergent
// recurrence; lies in [1/(3 i^2), 1/i^2].
Rational cf_child_ratio(const std::vector<Integer>& prefix, const Integer& i);

PierceDigits pierce_expand(const Rational& x, int max_terms);
Rational pierce_evaluate(const PierceDigits& digits, std::size_t n);
Rational pierce_evaluate(const PierceDigits& digits);
PierceDigits pierce_from_differences(const std::vector<Integer>& g, bool terminated);
Interval pierce_cylinder(const std::vector<Integer>& g_prefix);

// q_n^(1/n) per n, as decimals of the stated precision plus certified
// brackets; feeds the e-growth statistics.
struct GrowthStat {
    std::size_t n;
    Decimal root;
    RationalInterval bracket;
};
std::vector<GrowthStat> pierce_growth_stat(const PierceDigits& digits,
                                           int digits_precision = 16);

// Asymptotic frequency of partial quotient i under the Gauss measure:
// (1/ln 2) ln((i+1)^2 / (i(i+2))).
struct GaussFrequency {
    RationalInterval bracket;
    Decimal value;
};
GaussFrequency gauss_frequency(const Integer& i, int digits_precision = kDefaultDecimalDigits);

// Digit-transfer maps between the three systems: the same digit string read
// as a cylinder of the target system.  Terminated inputs map to exact points
// (degenerate intervals).
enum class TransferTarget { Pierce, ContinuedFraction };

struct TransferImage {
    Interval interval;
    bool point = false;
};
TransferImage transfer_map(const BarO2Digits& digits, TransferTarget target);

} // namespace ostro

#endif
