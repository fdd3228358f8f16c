#include "ostro/numeric.hpp"

#include <mpfr.h>

#include <memory>
#include <stdexcept>

namespace ostro {

namespace {

// Minimal RAII wrapper; all mpfr use stays inside this translation unit.
class Real {
public:
    explicit Real(int bits) { mpfr_init2(v_, bits); }
    ~Real() { mpfr_clear(v_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

// An mpfr value is an exact dyadic rational; extracting it is lossless, so a
// computation rounded down/up yields certified rational bounds.
Rational exact_rational(const Real& r) {
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, r.get());
    Rational out(q);
    mpq_clear(q);
    out.canonicalize();
    return out;
}

void set_from_rational(Real& dst, const Rational& x, mpfr_rnd_t rnd) {
    mpfr_set_q(dst.get(), x.get_mpq_t(), rnd);
}

} // namespace

RationalInterval pi_interval(int bits) {
    Real lo(bits), hi(bits);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
    return {exact_rational(lo), exact_rational(hi)};
}

RationalInterval e_interval(int bits) {
    Real one(bits), lo(bits), hi(bits);
    mpfr_set_ui(one.get(), 1, MPFR_RNDN);
    mpfr_exp(lo.get(), one.get(), MPFR_RNDD);
    mpfr_exp(hi.get(), one.get(), MPFR_RNDU);
    return {exact_rational(lo), exact_rational(hi)};
}

RationalInterval ln_interval(const Rational& x, int bits) {
    if (sgn(x) <= 0) throw DomainError("ln of non-positive value");
    Real xd(bits), xu(bits), lo(bits), hi(bits);
    set_from_rational(xd, x, MPFR_RNDD);
    set_from_rational(xu, x, MPFR_RNDU);
    mpfr_log(lo.get(), xd.get(), MPFR_RNDD);
    mpfr_log(hi.get(), xu.get(), MPFR_RNDU);
    return {exact_rational(lo), exact_rational(hi)};
}

RationalInterval log2_ratio_interval(const Rational& y, int bits) {
    RationalInterval num = ln_interval(y, bits);
    RationalInterval den = ln_interval(Rational(2), bits);
    // y > 1 in every use here, but handle the general sign split anyway.
    Rational lo, hi;
    if (sgn(num.lo) >= 0) {
        lo = num.lo / den.hi;
        hi = num.hi / den.lo;
    } else {
        lo = num.lo / den.lo;
        hi = num.hi / (sgn(num.hi) >= 0 ? den.lo : den.hi);
    }
    return {lo, hi};
}

RationalInterval pow2_interval(const Rational& exponent, int bits) {
    // Integer exponents stay exact.
    if (is_integer(exponent)) {
        const Integer& e = exponent.get_num();
        if (e.fits_slong_p()) {
            long v = e.get_si();
            Rational exact = v >= 0
                ? Rational(pow2(static_cast<unsigned long>(v)))
                : unit_fraction(pow2(static_cast<unsigned long>(-v)));
            return {exact, exact};
        }
    }
    Real ed(bits), eu(bits), lo(bits), hi(bits);
    set_from_rational(ed, exponent, MPFR_RNDD);
    set_from_rational(eu, exponent, MPFR_RNDU);
    // 2^x is increasing, so the rounded-down exponent gives the lower end.
    mpfr_ui_pow(lo.get(), 2, ed.get(), MPFR_RNDD);
    mpfr_ui_pow(hi.get(), 2, eu.get(), MPFR_RNDU);
    return {exact_rational(lo), exact_rational(hi)};
}

RationalInterval nth_root_interval(const Integer& value, unsigned long n, int bits) {
    if (sgn(value) <= 0) throw DomainError("root of non-positive value");
    if (n == 0) throw DomainError("zeroth root");
    Real x(bits), lo(bits), hi(bits);
    mpfr_set_z(x.get(), value.get_mpz_t(), MPFR_RNDN); // may round for huge inputs
    // Guard against the set_z rounding: widen by one ulp on each side via
    // nextbelow/nextabove before taking the root.
    Real xd(bits), xu(bits);
    mpfr_set(xd.get(), x.get(), MPFR_RNDN);
    mpfr_set(xu.get(), x.get(), MPFR_RNDN);
    mpfr_nextbelow(xd.get());
    mpfr_nextabove(xu.get());
    mpfr_rootn_ui(lo.get(), xd.get(), n, MPFR_RNDD);
    mpfr_rootn_ui(hi.get(), xu.get(), n, MPFR_RNDU);
    return {exact_rational(lo), exact_rational(hi)};
}

namespace {

Decimal render(mpfr_srcptr v, int digits) {
    char fmt[32];
    std::snprintf(fmt, sizeof(fmt), "%%.%dRNg", digits);
    int need = mpfr_snprintf(nullptr, 0, fmt, v);
    std::string buf(static_cast<std::size_t>(need) + 1, '\0');
    mpfr_snprintf(buf.data(), buf.size(), fmt, v);
    buf.resize(static_cast<std::size_t>(need));
    return {buf, digits};
}

} // namespace

Decimal to_decimal(const Rational& x, int digits) {
    int bits = static_cast<int>(digits * 3.4) + 32;
    Real v(bits);
    set_from_rational(v, x, MPFR_RNDN);
    return render(v.get(), digits);
}

Decimal nth_root_decimal(const Integer& value, unsigned long n, int digits) {
    int bits = static_cast<int>(digits * 3.4) + 32;
    Real x(bits), r(bits);
    mpfr_set_z(x.get(), value.get_mpz_t(), MPFR_RNDN);
    mpfr_rootn_ui(r.get(), x.get(), n, MPFR_RNDN);
    return render(r.get(), digits);
}

Decimal to_decimal(const RationalInterval& iv, int digits) {
    return to_decimal((iv.lo + iv.hi) / 2, digits);
}

} // namespace ostro
