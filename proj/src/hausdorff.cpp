#include "ostro/hausdorff.hpp"

#include "ostro/errors.hpp"

namespace ostro {

CoveringSum covering_sum(const PrefixFamily& family, const Rational& alpha, long k) {
    if (sgn(alpha) <= 0) throw DomainError("alpha must be positive");
    if (k < 1) throw DomainError("k must be >= 1");

    Integer product(1);
    for (long i = 1; i <= k; ++i) product *= family.m.at(i);

    Rational exponent = alpha * Rational(pow2(static_cast<unsigned long>(k - 1)));
    if (exponent > Rational(Integer(seq::kMaxExponent)))
        throw ValidityError("covering exponent exceeds evaluation budget");
    CoveringSum out;
    out.k = k;
    if (is_integer(exponent)) {
        Rational value = Rational(product) / Rational(pow2(exponent.get_num().get_ui()));
        out.value = {value, value};
        out.exact = true;
    } else {
        RationalInterval denom = pow2_interval(exponent);
        out.value = {Rational(product) / denom.hi, Rational(product) / denom.lo};
        out.exact = false;
    }
    return out;
}

namespace {

// Structural witness for m_k <= a^k: an exact base case plus the eventual
// per-step ratio bound.  Exponential forms have an exact constant ratio;
// polynomials ratio-bound by 2 past their tame point.
std::optional<Integer> zero_dim_witness(const PrefixFamily& family) {
    const auto& growth = family.m.growth();
    if (!growth) return std::nullopt;
    using seq::GrowthClass;

    if (growth->cls == GrowthClass::Polynomial) {
        auto tame = seq::poly_tame_from(*growth->poly);
        if (!tame) return std::nullopt;
        Integer a(2); // ratio bound past tame
        // cover indices up to the tame point exactly: need m(k) <= a^k there
        for (long k = 1; k <= *tame; ++k) {
            Integer mk = family.m.at(k);
            while (ipow(a, static_cast<unsigned long>(k)) < mk) a += 1;
        }
        return a;
    }
    if (growth->cls == GrowthClass::Exponential) {
        const auto& f = *growth->exp;
        Integer slope = f.expo.c.size() > 1 ? f.expo.c[1] : Integer(0);
        if (slope < 1 || !slope.fits_ulong_p()) return std::nullopt;
        Integer step = ipow(f.base, slope.get_ui());
        Integer a = std::max(step, family.m.at(1));
        return a; // m(k) = m(1) step^(k-1) <= a a^(k-1)
    }
    return std::nullopt; // faster growth admits no exponential envelope
}

} // namespace

CoveringReport certify_zero_dim(const PrefixFamily& family,
                                const std::vector<Rational>& alpha_grid, int depth,
                                const Rational& threshold) {
    CoveringReport report;
    report.family = "prefix:" + family.m.source();
    report.threshold = threshold;

    if (auto witness = zero_dim_witness(family)) {
        report.dim_zero_certificate = true;
        report.witness_base = *witness;
        report.certificate = "m_k <= " + witness->get_str() +
                             "^k for every k, so every covering sum tends to zero and the "
                             "dimension is zero";
    } else {
        report.certificate = "no exponential envelope; per-alpha sums only";
    }

    for (const Rational& alpha : alpha_grid) {
        AlphaReport ar;
        ar.alpha = alpha;
        for (long k = 1; k <= depth; ++k) {
            try {
                ar.sums.push_back(covering_sum(family, alpha, k));
            } catch (const ValidityError&) {
                break;
            }
        }
        if (!ar.sums.empty()) ar.upper_bound_certified = ar.sums.back().value.hi < threshold;
        report.alphas.push_back(std::move(ar));
    }
    return report;
}

const std::vector<E2Entry>& e2_constants() {
    static const std::vector<E2Entry> table = {
        {"Good 1941", "0.5194", "0.5433", ""},
        {"Bumby 1982/1985", "0.5312", "0.5314", ""},
        {"Hensley 1989", "0.53128049", "0.53128051", ""},
        {"Hensley 1996", "", "", "0.5312805062772051416"},
        {"Jenkinson-Pollicott 2001", "", "", "arbitrary-precision method"},
    };
    return table;
}

BoundedDigitReport bounded_digit_report(int max_bound) {
    BoundedDigitReport report;
    report.o2_dimension = "0";
    report.cf_dimension = "1";
    report.e2_constants = e2_constants();

    // Constant-bound families carry a direct certificate; the bounded-digit
    // set is their countable union, so its dimension is the supremum 0.
    for (int m0 = 1; m0 <= max_bound; ++m0) {
        PrefixFamily fam{Sequence::from_expr(seq::make_const(Integer(m0)), std::to_string(m0))};
        auto witness = zero_dim_witness(fam);
        if (!witness) throw DomainError("constant family unexpectedly lacks a certificate");
        report.certified_bounds.push_back(Integer(m0));
    }
    return report;
}

} // namespace ostro
