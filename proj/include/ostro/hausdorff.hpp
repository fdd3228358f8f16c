#ifndef OSTRO_HAUSDORFF_HPP
#define OSTRO_HAUSDORFF_HPP

#include <optional>
#include <string>
#include <vector>

#include "ostro/family.hpp"
#include "ostro/measure.hpp"
#include "ostro/numeric.hpp"

namespace ostro {

// One covering sum m_1 ... m_k / 2^(alpha 2^(k-1)); exact when the exponent
// is an integer, otherwise an outward-rounded bracket.
struct CoveringSum {
    long k = 0;
    RationalInterval value;
    bool exact = false;
};

CoveringSum covering_sum(const PrefixFamily& family, const Rational& alpha, long k);

struct AlphaReport {
    Rational alpha;
    std::vector<CoveringSum> sums;
    bool upper_bound_certified = false; // final sum certified below the threshold
};

struct CoveringReport {
    std::string family;
    std::vector<AlphaReport> alphas;
    bool dim_zero_certificate = false;     // structural: m_k <= a^k for an integer a
    std::optional<Integer> witness_base;   // the a above
    std::string certificate;
    Rational threshold;
};

// Per-alpha covering sums to `depth`, plus the structural zero-dimension
// certificate when the family admits one.
CoveringReport certify_zero_dim(const PrefixFamily& family,
                                const std::vector<Rational>& alpha_grid, int depth,
                                const Rational& threshold = make_rational(1, 1000000));

// Reference comparison for bounded-digit sets: the certified zero dimension
// on the alternating-series side against the continued-fraction constants.
struct E2Entry {
    std::string source;
    std::string lower;
    std::string upper;
    std::string value; // point estimate when the source reports one
};

struct BoundedDigitReport {
    std::string o2_dimension;              // "0", by countable union of certificates
    std::vector<Integer> certified_bounds; // the m0 values covered by direct certificates
    std::string cf_dimension;              // "1", cited reference value
    std::vector<E2Entry> e2_constants;
};

BoundedDigitReport bounded_digit_report(int max_bound = 8);

const std::vector<E2Entry>& e2_constants();

} // namespace ostro

#endif
