#include "ostro/measure.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "ostro/errors.hpp"

namespace ostro {

std::string to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Converges: return "Converges";
        case SeriesVerdict::Diverges: return "Diverges";
        case SeriesVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string to_string(MeasureVerdict v) {
    switch (v) {
        case MeasureVerdict::PositiveCertified: return "PositiveCertified";
        case MeasureVerdict::ZeroCertified: return "ZeroCertified";
        case MeasureVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

// Collects exact series terms until the horizon or the evaluation budget.
template <typename TermFn>
void collect_terms(SeriesReport& report, int horizon, TermFn&& term) {
    for (long k = 1; k <= horizon; ++k) {
        try {
            Rational t = term(k);
            report.partial_sum += t;
            report.trace.push_back({k, t, ""});
        } catch (const ValidityError&) {
            if (!report.trace.empty()) {
                report.trace.back().note += "[window truncated by evaluation budget]";
                return;
            }
            throw;
        } catch (const IndexError&) {
            // value-backed sequence ran out of entries
            if (!report.trace.empty()) {
                report.trace.back().note += "[window limited by the stored sequence]";
                return;
            }
            throw;
        }
    }
}

long window_end(const SeriesReport& report) {
    return report.trace.empty() ? 0 : report.trace.back().k;
}

// Exact window consistency check for a certified halving onset: every
// consecutive computed pair from k0 on must satisfy t_{k+1} <= t_k / 2.
bool window_halves(const SeriesReport& report, long k0) {
    for (std::size_t i = 0; i + 1 < report.trace.size(); ++i) {
        if (report.trace[i].k < k0) continue;
        if (report.trace[i + 1].term * 2 > report.trace[i].term) return false;
    }
    return true;
}

// Sufficient integer check for base^expo >= rhs_base^(2^k): compare the
// exponent against 2^k * bitlen(rhs_base), avoiding giant powers.
bool power_dominates(const Integer& base, const Integer& expo, const Integer& rhs_base, long k) {
    if (base < 2 || expo <= 0) return false;
    std::size_t rhs_bits = mpz_sizeinbase(rhs_base.get_mpz_t(), 2);
    Integer need = pow2(static_cast<unsigned long>(k)) * static_cast<unsigned long>(rhs_bits);
    return expo >= need;
}

} // namespace

SeriesReport criterion_tail(const TailFamily& family, const Integer& b, int horizon) {
    if (b < 1) throw DomainError("criterion_tail requires b >= 1");
    horizon = std::min(horizon, 20);

    SeriesReport report;
    collect_terms(report, horizon, [&](long k) {
        Integer v = family.v.at(k + 1);
        if (v < 0) throw ValidityError("negative tail bound");
        return make_rational(v, seq::tower(b, k));
    });
    if (report.trace.empty()) return report;
    long end = window_end(report);

    const auto& growth = family.v.growth();
    if (!growth) {
        report.certificate = "no structural form; window only";
        return report;
    }

    using seq::GrowthClass;
    switch (growth->cls) {
        case GrowthClass::Zero:
            report.verdict = SeriesVerdict::Converges;
            report.k0 = 1;
            report.certificate = "all terms vanish (no digits removed)";
            return report;

        case GrowthClass::Polynomial: {
            auto tame = seq::poly_tame_from(*growth->poly);
            if (!tame) break;
            if (b >= 2) {
                long k0 = std::max(1l, *tame - 1);
                report.k0 = k0;
                report.verdict = SeriesVerdict::Converges;
                report.certificate =
                    "polynomial bound: v(k+1)/v(k) <= 2 for k >= " + std::to_string(*tame) +
                    ", so term ratio <= 2/b^(2^k) <= 1/2";
            } else {
                // b = 1: terms equal v(k+1), eventually positive and growing.
                report.k0 = *tame;
                report.verdict = SeriesVerdict::Diverges;
                report.certificate = "b = 1: terms equal v(k+1), positive from k = " +
                                     std::to_string(*tame);
            }
            return report;
        }

        case GrowthClass::Exponential: {
            const auto& f = *growth->exp;
            Integer slope = f.expo.c.size() > 1 ? f.expo.c[1] : Integer(0);
            if (slope < 1 || !slope.fits_ulong_p()) break;
            Integer step = ipow(f.base, slope.get_ui()); // exact ratio v(k+1)/v(k)
            if (b >= 2) {
                for (long k0 = 1; k0 <= std::min<long>(end, 18); ++k0) {
                    if (seq::tower(b, k0) >= 2 * step) {
                        report.k0 = k0;
                        report.verdict = SeriesVerdict::Converges;
                        report.certificate = "exponential bound: exact ratio " + step.get_str() +
                                             " dominated by b^(2^k) from k = " + std::to_string(k0);
                        return report;
                    }
                }
                break;
            }
            report.verdict = SeriesVerdict::Diverges;
            report.k0 = 1;
            report.certificate = "b = 1: terms grow by the exact factor " + step.get_str();
            return report;
        }

        case GrowthClass::ExpPolynomial: {
            const auto& f = *growth->exp;
            if (b < 2) break;
            seq::Poly ratio_expo = seq::poly_shift(seq::poly_delta(f.expo), 1);
            for (long k0 = 1; k0 <= std::min<long>(end - 1, 14); ++k0) {
                if (seq::certify_exp_le_tower(Integer(2), f.base, ratio_expo, b, k0)) {
                    report.k0 = k0;
                    report.verdict = SeriesVerdict::Converges;
                    report.certificate =
                        "super-exponential bound with polynomial exponent: "
                        "2 a^(dQ(k+1)) <= b^(2^k) certified from k = " + std::to_string(k0);
                    return report;
                }
            }
            break;
        }

        case GrowthClass::DoublyExponential: {
            const auto& f = *growth->dexp;
            if (f.s > 32) break;
            Integer x = ipow(f.inner, static_cast<unsigned long>(f.s)); // inner step c^s
            if (x == 2) {
                // v(k+1) = mult a^h (beta)^(2^k) with beta = a^(g 2^(t+1)).
                long j = std::max(0l, -(f.t + 1));
                if (j > 20) break;
                long expo = f.t + 1 + j; // g * 2^expo is an integer exponent
                Integer lhs_expo = f.g * pow2(static_cast<unsigned long>(expo));
                if (!lhs_expo.fits_ulong_p() || lhs_expo.get_ui() > seq::kMaxExponent) break;
                Integer lhs = ipow(f.base, lhs_expo.get_ui());
                Integer rhs = b >= 2 ? seq::tower(b, j) : Integer(1);
                if (b >= 2 && lhs < rhs) {
                    // beta < b: ratio (beta/b)^(2^k) decreases; one exact
                    // halving hands the rest to monotonicity.
                    for (std::size_t i = 0; i + 1 < report.trace.size(); ++i) {
                        if (report.trace[i + 1].term * 2 <= report.trace[i].term) {
                            report.k0 = report.trace[i].k;
                            report.verdict = SeriesVerdict::Converges;
                            report.certificate =
                                "doubly-exponential bound dominated: base-per-2^k below b, "
                                "ratio halves from k = " + std::to_string(*report.k0);
                            return report;
                        }
                    }
                    break;
                }
                report.verdict = SeriesVerdict::Diverges;
                report.k0 = 1;
                report.certificate = "terms are mult*a^h*(beta/b)^(2^k) with beta >= b";
                return report;
            }
            if (x >= 3) {
                // Term ratio a^(dE(k+1))/b^(2^k) with dE contracting by x per
                // step; once it reaches 1 it stays above 1 (squaring on the
                // right, factor x >= 2 on the left exponent).
                for (long k0 = std::max(1l, (-f.t + f.s) / f.s); k0 + 1 <= end; ++k0) {
                    long e_index = f.s * (k0 + 1) + f.t;
                    if (e_index < 0) continue;
                    Integer d_expo = f.g * ipow(f.inner, static_cast<unsigned long>(e_index)) * (x - 1);
                    bool dominates = power_dominates(f.base, d_expo, b, k0);
                    if (!dominates && d_expo.fits_ulong_p() &&
                        d_expo.get_ui() <= seq::kMaxExponent) {
                        dominates = ipow(f.base, d_expo.get_ui()) >= seq::tower(b, k0);
                    }
                    if (dominates) {
                        report.k0 = k0;
                        report.verdict = SeriesVerdict::Diverges;
                        report.certificate =
                            "inner growth factor " + x.get_str() +
                            " >= 3: term ratio stays >= 1 from k = " + std::to_string(k0);
                        return report;
                    }
                }
                break;
            }
            break;
        }

        case GrowthClass::Unclassified: break;
    }

    report.certificate = report.certificate.empty() ? "no certificate within horizon"
                                                    : report.certificate;
    return report;
}

MSequence m_sequence(const PrefixFamily& family, int count) {
    MSequence seq;
    seq.M.reserve(static_cast<std::size_t>(count));
    for (long k = 1; k <= count; ++k) {
        Integer mk = family.m.at(k);
        if (mk < 1) throw ValidityError("prefix bound m_k < 1");
        if (k == 1) {
            seq.M.push_back(mk);
        } else {
            const Integer& prev = seq.M.back();
            seq.M.push_back((prev + 1) * (prev + 1) + mk);
        }
    }
    return seq;
}

namespace {

std::optional<long> prefix_zero_cert(const PrefixFamily& family, long end) {
    const auto& growth = family.m.growth();
    if (!growth) return std::nullopt;
    using seq::GrowthClass;
    // Need m(k+1) <= 2^(2^(k-1)) for all k >= k0; substitute j = k-1.
    if (growth->cls == GrowthClass::Polynomial) {
        seq::Poly shifted = seq::poly_shift(*growth->poly, 2);
        auto tame = seq::poly_tame_from(shifted);
        if (!tame) return std::nullopt;
        for (long j0 = std::max(0l, *tame); j0 <= std::min(end, 16l); ++j0)
            if (seq::certify_poly_le_tower(shifted, Integer(2), j0)) return j0 + 1;
        return std::nullopt;
    }
    if (growth->cls == GrowthClass::Exponential || growth->cls == GrowthClass::ExpPolynomial) {
        const auto& f = *growth->exp;
        seq::Poly shifted = seq::poly_shift(f.expo, 2);
        for (long j0 = 0; j0 <= std::min(end, 16l); ++j0)
            if (seq::certify_exp_le_tower(f.mult, f.base, shifted, Integer(2), j0)) return j0 + 1;
        return std::nullopt;
    }
    return std::nullopt;
}

struct PrefixPositivityCert {
    long k0;
    std::string text;
};

std::optional<PrefixPositivityCert> prefix_positivity_cert(const PrefixFamily& family,
                                                           const MSequence& M, long end) {
    // Declared halving from a value-backed construction.
    if (auto declared = family.m.declared_halving()) {
        return PrefixPositivityCert{*declared,
                                    "halving declared by the family construction from k = " +
                                        std::to_string(*declared)};
    }
    const auto& growth = family.m.growth();
    if (!growth || growth->cls != seq::GrowthClass::DoublyExponential) return std::nullopt;
    const auto& f = *growth->dexp;
    if (f.s > 32) return std::nullopt;
    Integer x = ipow(f.inner, static_cast<unsigned long>(f.s));
    if (x < 3) return std::nullopt;

    long k_min = 1;
    while (f.s * k_min + f.t < 0) ++k_min;

    auto m_at = [&](long k) { return family.m.at(k); };
    // Base point j1: M_j <= 2 m_j propagates once 5 m_j^2 <= m_{j+1} holds,
    // and that ratio is monotone for inner growth factor >= 3.
    std::optional<long> j1;
    for (long j = std::max(2l, k_min); j + 1 <= end && j <= static_cast<long>(M.M.size()); ++j) {
        Integer mj = m_at(j);
        if (mj >= 5 && M.M[static_cast<std::size_t>(j - 1)] <= 2 * mj &&
            5 * mj * mj <= m_at(j + 1)) {
            j1 = j;
            break;
        }
    }
    if (!j1) return std::nullopt;
    // Halving onset j0: 8 m(j+1)^3 <= m(j)^2 m(j+2), monotone in j.
    for (long j0 = *j1 + 1; j0 + 2 <= end + 1; ++j0) {
        Integer a = m_at(j0), bq = m_at(j0 + 1), cq = m_at(j0 + 2);
        if (8 * bq * bq * bq <= a * a * cq) {
            return PrefixPositivityCert{
                j0, "doubly-exponential growth (inner factor " + x.get_str() +
                        "): M_k <= 2 m_k from k = " + std::to_string(*j1) +
                        ", term halving certified from k = " + std::to_string(j0)};
        }
    }
    return std::nullopt;
}

} // namespace

PrefixCriteria criterion_prefix(const PrefixFamily& family, int horizon) {
    horizon = std::min(horizon, 16);
    PrefixCriteria out;

    int m_count = horizon + 2;
    for (;;) {
        try {
            out.M = m_sequence(family, m_count);
            break;
        } catch (const ValidityError&) {
            if (--m_count < 3) throw;
        } catch (const IndexError&) {
            if (--m_count < 3) throw;
        }
    }
    long end = m_count - 1;

    collect_terms(out.positivity, static_cast<int>(end - 1), [&](long k) {
        const Integer& Mk = out.M.M[static_cast<std::size_t>(k - 1)];
        return make_rational(Mk * Mk, family.m.at(k + 1));
    });
    collect_terms(out.zero, static_cast<int>(end - 1), [&](long k) {
        Integer t = seq::tower(Integer(2), k - 1);
        return make_rational(t, t + family.m.at(k + 1));
    });
    collect_terms(out.o1_reference, static_cast<int>(end - 1), [&](long k) {
        Integer sum(0);
        for (long j = 1; j <= k; ++j) sum += family.m.at(j);
        return make_rational(sum, family.m.at(k + 1));
    });
    out.o1_reference.certificate = "reference trace only (O1-system positivity test)";

    if (auto cert = prefix_positivity_cert(family, out.M, end)) {
        if (window_halves(out.positivity, cert->k0)) {
            out.positivity.verdict = SeriesVerdict::Converges;
            out.positivity.k0 = cert->k0;
            out.positivity.certificate = cert->text;
        }
    }
    if (auto k0 = prefix_zero_cert(family, end)) {
        out.zero.verdict = SeriesVerdict::Diverges;
        out.zero.k0 = *k0;
        out.zero.certificate =
            "m(k+1) <= 2^(2^(k-1)) certified from k = " + std::to_string(*k0) +
            ": terms stay >= 1/2";
    }

    if (out.positivity.verdict == SeriesVerdict::Converges) {
        out.verdict = MeasureVerdict::PositiveCertified;
    } else if (out.zero.verdict == SeriesVerdict::Diverges) {
        out.verdict = MeasureVerdict::ZeroCertified;
    } else {
        out.verdict = MeasureVerdict::Inconclusive;
        const auto& growth = family.m.growth();
        if (growth && growth->cls == seq::GrowthClass::DoublyExponential) {
            Integer x = ipow(growth->dexp->inner, static_cast<unsigned long>(growth->dexp->s));
            if (x == 2) {
                out.note =
                    "both tests inconclusive for this doubly-exponential bound: the "
                    "zero-measure series has summable terms and the positivity series "
                    "diverges; no implemented criterion decides the family";
            }
        }
    }
    return out;
}

namespace {

// Exact companion values along the all-minimal-digit path of a family,
// optionally overriding the first digit.  Returns C_k = c_k (c_k + 1) for
// k = 0..count (C_0 = 1).
std::vector<Integer> min_path_big_c(const DigitFamily& family, long count,
                                    std::optional<Integer> first_digit) {
    std::vector<Integer> big_c;
    big_c.reserve(static_cast<std::size_t>(count) + 1);
    big_c.push_back(Integer(1));
    Integer c;
    for (long k = 1; k <= count; ++k) {
        Integer d = (k == 1 && first_digit) ? *first_digit : min_allowed_digit(family, k);
        if (k == 1)
            c = d;
        else
            c = c * (c + 1) - 1 + d;
        big_c.push_back(c * (c + 1));
    }
    return big_c;
}

} // namespace

SquaresRatioBound squares_removed_ratio(const Integer& big_c) {
    if (big_c < 1) throw DomainError("cylinder value must be >= 1");
    SquaresRatioBound out;
    Integer root = isqrt(big_c);
    bool feasible = root + 1 <= 512;
    long n = feasible ? std::max(32l, root.get_si() + 1) : 256;
    out.terms = n;
    Rational partial(0);
    for (long m = 1; m <= n; ++m) {
        Integer mm = Integer(m) * m;
        partial += make_rational(big_c, (big_c + mm - 1) * (big_c + mm));
    }
    out.partial = partial;
    // Every term is <= C/m^4, so the tail past n is below C/(3 n^3).
    Rational tail = make_rational(big_c, 3 * Integer(n) * n * n);
    RationalInterval pi = pi_interval();
    out.analytic = pi.hi / (2 * Rational(root));
    if (feasible) {
        out.upper = partial + tail;
        out.full_cert = true;
        if (out.upper > out.analytic && out.analytic < 1) out.upper = out.analytic;
    } else {
        out.upper = out.analytic;
        out.full_cert = false;
    }
    return out;
}

ComplementCriteria criterion_complement(const ComplementFamily& family, int horizon) {
    horizon = std::min(horizon, 24);
    ComplementCriteria out;

    if (!family.b) {
        out.verdict = MeasureVerdict::PositiveCertified;
        out.series.verdict = SeriesVerdict::Converges;
        out.series.certificate = "no digits removed; the set is the whole interval";
        out.note = "lambda = 1";
        return out;
    }

    DigitFamily as_family = ComplementFamily{family.b, family.gap};

    // Squares route: removed values form the exact square sequence.
    const auto& growth = family.b->growth();
    bool squares = growth && growth->cls == seq::GrowthClass::Polynomial &&
                   growth->poly->c.size() == 3 && growth->poly->c[0] == 0 &&
                   growth->poly->c[1] == 0 && growth->poly->c[2] == 1;
    if (squares) {
        long levels = std::min(horizon, 8);
        auto big_c = min_path_big_c(as_family, levels, std::nullopt);
        Rational sum(0);
        bool all_below_one = true;
        for (long k = 1; k <= levels; ++k) {
            SquaresRatioBound rb = squares_removed_ratio(big_c[static_cast<std::size_t>(k - 1)]);
            Rational used = rb.full_cert ? rb.upper : rb.analytic;
            bool verified = rb.partial < rb.analytic;
            TraceEntry entry;
            entry.k = k;
            entry.term = used;
            entry.note = std::string(rb.full_cert ? "exact+tail" : "integral bound") +
                         "; truncated sum ~" + to_decimal(rb.partial, 12).text +
                         (verified ? " < level bound (verified exactly)" : " (not verified)");
            out.series.trace.push_back(std::move(entry));
            sum += used;
            if (used >= 1) all_below_one = false;
        }
        out.series.partial_sum = sum;
        if (all_below_one) {
            out.series.verdict = SeriesVerdict::Converges;
            out.series.k0 = 1;
            out.series.certificate =
                "removed-square mass per level is below pi/(2 sqrt(C)) with C doubly "
                "exponential along every admissible cylinder";
            out.verdict = MeasureVerdict::PositiveCertified;
        }
        return out;
    }

    // Gap route: needs the declared per-level gap bound.
    if (family.gap) {
        // Validity sweep over the window (throws on violation).
        removed_values(family, horizon + 1, horizon);
        Integer b1 = family.b->at(1);
        auto big_c = min_path_big_c(as_family, horizon, std::nullopt);
        collect_terms(out.series, horizon, [&](long k) -> Rational {
            // l_k = (1 + b1 / C_(k-1)) b1 upper-bounds the low-block ratio.
            Rational l = (Rational(1) + make_rational(b1, big_c[static_cast<std::size_t>(k - 1)])) *
                         Rational(b1);
            return Rational(1) / (4 * l * Rational(family.gap->at(k)));
        });
        const auto& gap_growth = family.gap->growth();
        bool slow_gap = gap_growth && gap_growth->cls == seq::GrowthClass::Polynomial &&
                        gap_growth->poly->degree() <= 1;
        if (slow_gap) {
            auto tame = seq::poly_tame_from(*gap_growth->poly);
            if (tame) {
                out.series.verdict = SeriesVerdict::Diverges;
                out.series.k0 = 1;
                out.series.certificate =
                    "terms >= 1/(4 (1+b1) b1 d_k) with d_k of degree <= 1: harmonic divergence";
                out.verdict = MeasureVerdict::ZeroCertified;
            }
        }
        if (out.verdict != MeasureVerdict::ZeroCertified)
            out.note = "gap bound declared but the gap sequence grows too fast for the "
                       "divergence certificate";
        return out;
    }

    out.note = "no route applies: neither squares shape nor a declared gap bound";
    return out;
}

PierceZeroReport pierce_growth_zero_test(const TailFamily& family, int horizon) {
    horizon = std::min(horizon, 24);
    PierceZeroReport out;

    for (long k = 1; k <= horizon; ++k) {
        try {
            Integer v = family.v.at(k);
            if (v >= 1)
                out.roots.emplace_back(k, nth_root_decimal(v, static_cast<unsigned long>(k), 12));
        } catch (const ValidityError&) {
            break;
        }
    }

    const auto& growth = family.v.growth();
    if (!growth) {
        out.note = "no structural form";
        return out;
    }
    // e < 3, certified; any growth rate >= 3 clears it.
    RationalInterval e = e_interval();
    if (e.hi >= 3) throw DomainError("unexpected: certified e bound too loose");

    using seq::GrowthClass;
    switch (growth->cls) {
        case GrowthClass::Zero:
            out.note = "no restriction (v = 0): the root test does not apply";
            return out;
        case GrowthClass::Polynomial:
            if (growth->poly->degree() == 0) {
                out.note = "constant shift: k-th roots tend to 1 < e; for constant tail bounds "
                           "the O1-restricted set has positive measure";
            } else {
                out.note = "polynomial growth: k-th roots tend to 1 < e";
            }
            return out;
        case GrowthClass::Exponential: {
            const auto& f = *growth->exp;
            Integer slope = f.expo.c.size() > 1 ? f.expo.c[1] : Integer(0);
            if (slope < 1 || !slope.fits_ulong_p()) return out;
            Integer step = ipow(f.base, slope.get_ui());
            if (step >= 3) {
                out.verdict = MeasureVerdict::ZeroCertified;
                out.certificate = "exact root limit " + step.get_str() + " exceeds e";
            } else {
                out.note = "root limit " + step.get_str() + " is below e; the test cannot fire";
            }
            return out;
        }
        case GrowthClass::ExpPolynomial: {
            const auto& f = *growth->exp;
            // v(k) >= 3^k from some k0: check once exactly, then dQ >= 2 keeps
            // the per-step factor at a^2 >= 4 > 3.
            seq::Poly dq = seq::poly_delta(f.expo);
            seq::Poly dq_m2 = seq::poly_sub(dq, seq::Poly{{Integer(2)}});
            auto tame = seq::poly_tame_from(dq_m2);
            if (!tame) return out;
            for (long k0 = *tame; k0 <= horizon; ++k0) {
                Integer e0 = f.expo.eval(Integer(k0));
                if (e0 < 0 || !e0.fits_ulong_p() || e0.get_ui() > seq::kMaxExponent) continue;
                if (f.mult * ipow(f.base, e0.get_ui()) >= ipow(Integer(3), static_cast<unsigned long>(k0))) {
                    out.verdict = MeasureVerdict::ZeroCertified;
                    out.certificate = "v(k) >= 3^k certified from k = " + std::to_string(k0) +
                                      "; root liminf exceeds e";
                    return out;
                }
            }
            return out;
        }
        case GrowthClass::DoublyExponential: {
            const auto& f = *growth->dexp;
            // Per-step factor a^(dE(k)) with dE >= 2 once c^(sk+t) >= 2.
            long k_min = 1;
            while (f.s * k_min + f.t < 1) ++k_min;
            for (long k0 = k_min; k0 <= horizon; ++k0) {
                long e_index = f.s * k0 + f.t;
                Integer e0 = f.g * ipow(f.inner, static_cast<unsigned long>(e_index)) + f.h;
                if (e0 < 0 || !e0.fits_ulong_p() || e0.get_ui() > seq::kMaxExponent) continue;
                if (f.mult * ipow(f.base, e0.get_ui()) >= ipow(Integer(3), static_cast<unsigned long>(k0))) {
                    out.verdict = MeasureVerdict::ZeroCertified;
                    out.certificate = "doubly-exponential growth: v(k) >= 3^k from k = " +
                                      std::to_string(k0) + "; root liminf exceeds e";
                    return out;
                }
            }
            return out;
        }
        case GrowthClass::Unclassified: out.note = "unclassified growth"; return out;
    }
    return out;
}

// --- level enumeration ------------------------------------------------------

namespace {

struct LevelAccum {
    std::vector<RationalSum> lo;        // exact level mass of enumerated cylinders
    std::vector<RationalSum> tail_hi;   // truncated mass credited to upper bounds
    std::vector<std::optional<Rational>> ratio_min;
    std::vector<std::optional<Rational>> ratio_max;

    explicit LevelAccum(int depth)
        : lo(static_cast<std::size_t>(depth) + 1),
          tail_hi(static_cast<std::size_t>(depth) + 1),
          ratio_min(static_cast<std::size_t>(depth) + 1),
          ratio_max(static_cast<std::size_t>(depth) + 1) {}

    void add_ratio(int level, const Rational& r) {
        auto idx = static_cast<std::size_t>(level);
        if (!ratio_min[idx] || r < *ratio_min[idx]) ratio_min[idx] = r;
        if (!ratio_max[idx] || r > *ratio_max[idx]) ratio_max[idx] = r;
    }
};

// Membership cache for complement families: the removed set is
// level-independent, so one sorted mask serves the whole enumeration.
struct RemovedMask {
    std::vector<bool> removed;

    static RemovedMask build(const ComplementFamily& family, long limit) {
        RemovedMask mask;
        mask.removed.assign(static_cast<std::size_t>(limit) + 1, false);
        if (!family.b) return mask;
        for (long m = 1;; ++m) {
            Integer bm = family.b->at(m);
            if (bm > limit) break;
            mask.removed[static_cast<std::size_t>(bm.get_si())] = true;
        }
        return mask;
    }

    bool is_removed(long digit) const {
        return digit >= 0 && static_cast<std::size_t>(digit) < removed.size() &&
               removed[static_cast<std::size_t>(digit)];
    }
    long limit() const { return static_cast<long>(removed.size()) - 1; }
};

// Children of a node enumerated per family; infinite digit sets are truncated
// after `width` allowed digits, and the dropped mass is credited to the upper
// bounds of every deeper level.
void enumerate(const DigitFamily& family, int depth, long width, const std::optional<Integer>& c,
               int level, LevelAccum& acc, const RemovedMask* mask = nullptr) {
    Integer big_c = c ? (*c) * (*c + 1) : Integer(1);
    if (level > 0) acc.lo[static_cast<std::size_t>(level)].add(unit_fraction(big_c));
    if (level == depth) return;
    long next = level + 1;

    auto descend = [&](const Integer& digit) {
        Integer child_c = c ? (*c) * (*c + 1) - 1 + digit : digit;
        enumerate(family, depth, width, child_c, level + 1, acc, mask);
    };
    auto credit_tail = [&](const Rational& tail_mass) {
        for (int l = level + 1; l <= depth; ++l)
            acc.tail_hi[static_cast<std::size_t>(l)].add(tail_mass);
    };

    if (const auto* pf = std::get_if<PrefixFamily>(&family)) {
        Integer m = pf->m.at(next);
        acc.add_ratio(level, make_rational(big_c, big_c + m)); // removed-mass ratio, exact
        for (Integer j(1); j <= m; ++j) descend(j);
        return;
    }
    if (const auto* tf = std::get_if<TailFamily>(&family)) {
        Integer v = tf->v.at(next);
        // Removed block 1..v has exact mass 1/C - 1/(C+v).
        acc.add_ratio(level, make_rational(v, big_c + v));
        for (Integer j = v + 1; j <= v + width; ++j) descend(j);
        credit_tail(unit_fraction(big_c + v + width));
        return;
    }
    long taken = 0;
    long j = 1;
    while (taken < width) {
        bool allowed = (mask && j <= mask->limit()) ? !mask->is_removed(j)
                                                    : digit_allowed(family, next, Integer(j));
        if (allowed) {
            descend(Integer(j));
            ++taken;
        }
        ++j;
    }
    credit_tail(unit_fraction(big_c + j - 1));
}

// Root children only: records the root-level ratio and tail credit, returns
// the rank-1 digits for the worker split.
std::vector<Integer> top_level_digits(const DigitFamily& family, long width,
                                      const RemovedMask* mask, LevelAccum& root_acc, int depth) {
    std::vector<Integer> digits;
    Integer big_c(1);
    auto credit_tail = [&](const Rational& tail_mass) {
        for (int l = 1; l <= depth; ++l)
            root_acc.tail_hi[static_cast<std::size_t>(l)].add(tail_mass);
    };
    if (const auto* pf = std::get_if<PrefixFamily>(&family)) {
        Integer m = pf->m.at(1);
        root_acc.add_ratio(0, make_rational(big_c, big_c + m));
        for (Integer j(1); j <= m; ++j) digits.push_back(j);
        return digits;
    }
    if (const auto* tf = std::get_if<TailFamily>(&family)) {
        Integer v = tf->v.at(1);
        root_acc.add_ratio(0, make_rational(v, big_c + v));
        for (Integer j = v + 1; j <= v + width; ++j) digits.push_back(j);
        credit_tail(unit_fraction(big_c + v + width));
        return digits;
    }
    long taken = 0;
    long j = 1;
    while (taken < width) {
        bool allowed = (mask && j <= mask->limit()) ? !mask->is_removed(j)
                                                    : digit_allowed(family, 1, Integer(j));
        if (allowed) {
            digits.push_back(Integer(j));
            ++taken;
        }
        ++j;
    }
    credit_tail(unit_fraction(big_c + j - 1));
    return digits;
}

} // namespace

std::vector<LevelMeasure> exact_level_measures(const DigitFamily& family, int depth,
                                               const EnumBudget& budget) {
    if (depth < 1) throw DomainError("depth must be >= 1");

    long width = budget.per_level_children;
    if (const auto* pf = std::get_if<PrefixFamily>(&family)) {
        // Full enumeration; the cylinder count is the product of the m_k.
        Integer count(1);
        int affordable = 0;
        for (int k = 1; k <= depth; ++k) {
            count *= pf->m.at(k);
            if (count <= budget.max_cylinders) affordable = k;
        }
        if (count > budget.max_cylinders)
            throw BudgetExceeded("prefix enumeration needs " + count.get_str() +
                                     " cylinders at depth " + std::to_string(depth),
                                 affordable);
    } else {
        // Truncated enumeration: width^depth nodes.
        while (width > 2) {
            double nodes = std::pow(static_cast<double>(width), depth);
            if (nodes <= static_cast<double>(budget.max_cylinders)) break;
            width /= 2;
        }
    }

    std::optional<RemovedMask> mask;
    if (const auto* cf = std::get_if<ComplementFamily>(&family); cf && cf->b)
        mask = RemovedMask::build(*cf, 8 * width + 64);
    const RemovedMask* mask_ptr = mask ? &*mask : nullptr;

    int jobs = std::max(1, budget.jobs);
    std::vector<LevelAccum> accs;
    if (jobs == 1) {
        accs.emplace_back(depth);
        enumerate(family, depth, width, std::nullopt, 0, accs[0], mask_ptr);
    } else {
        // Sibling subtrees are independent: split the top-level digits across
        // workers; exact addition makes the merged result identical for any
        // worker count.
        LevelAccum root_acc(depth);
        std::vector<Integer> top = top_level_digits(family, width, mask_ptr, root_acc, depth);
        accs.push_back(std::move(root_acc));
        int chunk = static_cast<int>((top.size() + static_cast<std::size_t>(jobs) - 1) /
                                     static_cast<std::size_t>(jobs));
        std::vector<LevelAccum> worker_accs;
        for (int w = 0; w < jobs; ++w) worker_accs.emplace_back(depth);
        std::vector<std::future<void>> futures;
        for (int w = 0; w < jobs; ++w) {
            std::size_t begin = static_cast<std::size_t>(w) * static_cast<std::size_t>(chunk);
            std::size_t end = std::min(top.size(), begin + static_cast<std::size_t>(chunk));
            if (begin >= end) break;
            LevelAccum* target = &worker_accs[static_cast<std::size_t>(w)];
            futures.push_back(std::async(std::launch::async, [&, begin, end, target] {
                for (std::size_t i = begin; i < end; ++i)
                    enumerate(family, depth, width, top[i], 1, *target, mask_ptr);
            }));
        }
        for (auto& f : futures) f.get();
        for (auto& wa : worker_accs) accs.push_back(std::move(wa));
    }

    std::vector<LevelMeasure> out;
    for (int k = 1; k <= depth; ++k) {
        LevelMeasure lm;
        lm.k = k;
        Rational level_lo(0), tail_sum(0);
        std::optional<Rational> rmin, rmax;
        for (const auto& acc : accs) {
            level_lo += acc.lo[static_cast<std::size_t>(k)].total();
            tail_sum += acc.tail_hi[static_cast<std::size_t>(k)].total();
            auto idx = static_cast<std::size_t>(k - 1);
            if (acc.ratio_min[idx] && (!rmin || *acc.ratio_min[idx] < *rmin))
                rmin = acc.ratio_min[idx];
            if (acc.ratio_max[idx] && (!rmax || *acc.ratio_max[idx] > *rmax))
                rmax = acc.ratio_max[idx];
        }
        Rational level_hi = level_lo + tail_sum;
        lm.f_k = {level_lo, std::min(level_hi, Rational(1))};
        if (rmin && rmax) lm.removed_ratio = RationalInterval{*rmin, *rmax};
        out.push_back(std::move(lm));
    }
    return out;
}

// --- combined bounds ---------------------------------------------------------

namespace {

Rational upper_from_levels(const DigitFamily& family, int depth, const EnumBudget& budget) {
    try {
        auto levels = exact_level_measures(family, depth, budget);
        Rational best(1);
        for (const auto& lm : levels) best = std::min(best, lm.f_k.hi);
        return best;
    } catch (const BudgetExceeded& e) {
        if (e.max_depth >= 1) {
            auto levels = exact_level_measures(family, e.max_depth, budget);
            Rational best(1);
            for (const auto& lm : levels) best = std::min(best, lm.f_k.hi);
            return best;
        }
        return Rational(1);
    }
}

MeasureBound tail_bounds(const TailFamily& family, int depth, int horizon,
                         const EnumBudget& budget) {
    MeasureBound out;
    out.depth = depth;

    const auto& growth = family.v.growth();
    if (growth && growth->cls == seq::GrowthClass::Zero) {
        out.lower = out.upper = Rational(1);
        out.verdict = MeasureVerdict::PositiveCertified;
        out.certificate = "no digits removed";
        return out;
    }

    // Choose the witness b: 2 covers sub-doubly-exponential growth; inner
    // factor 2 needs any integer above the per-2^k base.
    Integer b(2);
    if (growth && growth->cls == seq::GrowthClass::DoublyExponential) {
        const auto& f = *growth->dexp;
        Integer x = ipow(f.inner, static_cast<unsigned long>(f.s));
        if (x == 2) {
            long j = std::max(0l, -(f.t + 1));
            Integer expo = f.g * pow2(static_cast<unsigned long>(f.t + 1 + j));
            if (j <= 20 && expo.fits_ulong_p() && expo.get_ui() <= seq::kMaxExponent) {
                Integer a_pow = ipow(f.base, expo.get_ui());
                Integer root;
                mpz_root(root.get_mpz_t(), a_pow.get_mpz_t(), 1ul << static_cast<unsigned long>(j));
                b = root + 1;
                if (b < 2) b = 2;
            }
        }
    }

    SeriesReport crit = criterion_tail(family, b, horizon);
    out.trace = crit.trace;
    out.note = crit.certificate;

    if (crit.verdict != SeriesVerdict::Converges) {
        out.upper = upper_from_levels(DigitFamily(family), std::min(depth, 3), budget);
        out.certificate = "series test did not certify convergence for b = " + b.get_str();
        return out;
    }

    // Positive measure inside the first-rank cylinder with digit
    // c > max(v_1, b); exact per-level ratios along the minimal path, with the
    // certified halving controlling the tail product.
    Integer c0 = std::max(family.v.at(1), b) + 1;
    long k0 = *crit.k0;
    long end = window_end(crit);
    std::optional<long> K;
    for (long k = std::max(k0, 2l); k + 1 <= end; ++k) {
        const Rational& t_next = crit.trace[static_cast<std::size_t>(k)].term; // t_{k+1}
        if (2 * t_next < 1) {
            K = k;
            break;
        }
    }
    if (!K) {
        out.upper = upper_from_levels(DigitFamily(family), std::min(depth, 3), budget);
        out.certificate = "halving certified but the window is too short for a tail bound";
        return out;
    }

    auto big_c = min_path_big_c(DigitFamily(family), *K + 1, c0);
    Rational product = unit_fraction(c0 * (c0 + 1));
    for (long k = 1; k <= *K; ++k) {
        Integer v_next = family.v.at(k + 1);
        Rational rho = make_rational(v_next, big_c[static_cast<std::size_t>(k)] + v_next);
        product *= (Rational(1) - rho);
    }
    Rational tail_term = crit.trace[static_cast<std::size_t>(*K)].term; // t_{K+1}
    product *= (Rational(1) - 2 * tail_term);

    out.lower = product;
    out.upper = upper_from_levels(DigitFamily(family), std::min(depth, 3), budget);
    out.verdict = MeasureVerdict::PositiveCertified;
    out.certificate = "tail series converges for b = " + b.get_str() + " (k0 = " +
                      std::to_string(k0) + "); lower bound inside the first-rank cylinder " +
                      c0.get_str();
    return out;
}

MeasureBound prefix_bounds(const PrefixFamily& family, int depth, int horizon,
                           const EnumBudget& budget) {
    MeasureBound out;
    out.depth = depth;
    PrefixCriteria crit = criterion_prefix(family, horizon);
    out.verdict = crit.verdict;
    out.note = crit.note;
    out.trace = crit.positivity.trace;

    long end = window_end(crit.positivity);
    auto cmin = min_path_big_c(DigitFamily(family), end + 1, std::nullopt);

    // Exact per-level bounds on the removed ratio lambda(F_j-bar)/lambda(F_{j-1}):
    //   from below via the minimal companion, from above via M.
    auto removed_lo = [&](long j) {
        const Integer& c = cmin[static_cast<std::size_t>(j - 1)];
        return make_rational(c, c + family.m.at(j));
    };
    auto removed_hi = [&](long j) {
        Integer cmax(1);
        if (j >= 2) {
            const Integer& M_prev = crit.M.M[static_cast<std::size_t>(j - 2)];
            cmax = M_prev * (M_prev + 1);
        }
        return make_rational(cmax, cmax + family.m.at(j));
    };

    if (crit.verdict == MeasureVerdict::PositiveCertified) {
        long k0 = *crit.positivity.k0;
        std::optional<long> K;
        for (long k = std::max(k0, 1l); k <= end; ++k) {
            if (4 * crit.positivity.trace[static_cast<std::size_t>(k - 1)].term < 1) {
                K = k;
                break;
            }
        }
        if (K) {
            Rational product(1);
            for (long j = 1; j <= *K; ++j) product *= (Rational(1) - removed_hi(j));
            product *= (Rational(1) - 4 * crit.positivity.trace[static_cast<std::size_t>(*K - 1)].term);
            out.lower = std::max(out.lower, product);
            out.certificate = crit.positivity.certificate;
        }
        Rational upper(1);
        for (long j = 1; j <= K.value_or(end); ++j) upper *= (Rational(1) - removed_lo(j));
        out.upper = std::min(upper, upper_from_levels(DigitFamily(family), depth, budget));
        return out;
    }

    if (crit.verdict == MeasureVerdict::ZeroCertified) {
        Rational upper(1);
        for (long j = 1; j <= end; ++j) upper *= (Rational(1) - removed_lo(j));
        out.upper = std::min(upper, upper_from_levels(DigitFamily(family), depth, budget));
        out.certificate = crit.zero.certificate;
        out.trace = crit.zero.trace;
        return out;
    }

    out.upper = upper_from_levels(DigitFamily(family), depth, budget);
    return out;
}

MeasureBound complement_bounds(const ComplementFamily& family, int depth, int horizon,
                               const EnumBudget& budget) {
    MeasureBound out;
    out.depth = depth;
    ComplementCriteria crit = criterion_complement(family, horizon);
    out.verdict = crit.verdict;
    out.note = crit.note;
    out.trace = crit.series.trace;
    out.certificate = crit.series.certificate;

    if (!family.b) {
        out.lower = out.upper = Rational(1);
        return out;
    }

    if (crit.verdict == MeasureVerdict::PositiveCertified) {
        // Squares route: product over the traced level bounds plus the
        // certified doubly-exponential tail.
        Rational product(1);
        long K = 0;
        for (const auto& entry : crit.series.trace) {
            product *= (Rational(1) - entry.term);
            K = entry.k;
        }
        RationalInterval pi = pi_interval();
        Rational tail = pi.hi * unit_fraction(seq::tower(Integer(2), K - 1));
        if (tail < 1) product *= (Rational(1) - tail);
        out.lower = product > 0 ? product : Rational(0);
        out.upper = upper_from_levels(DigitFamily(family), std::min(depth, 3), budget);
        return out;
    }

    if (crit.verdict == MeasureVerdict::ZeroCertified) {
        Rational upper(1);
        for (const auto& entry : crit.series.trace) upper *= (Rational(1) - entry.term);
        out.upper = std::min(upper, upper_from_levels(DigitFamily(family), std::min(depth, 3), budget));
        return out;
    }

    out.upper = upper_from_levels(DigitFamily(family), std::min(depth, 3), budget);
    return out;
}

} // namespace

MeasureBound measure_bounds(const DigitFamily& family, int depth, int horizon,
                            const EnumBudget& budget) {
    MeasureBound out;
    if (const auto* tf = std::get_if<TailFamily>(&family))
        out = tail_bounds(*tf, depth, horizon, budget);
    else if (const auto* pf = std::get_if<PrefixFamily>(&family))
        out = prefix_bounds(*pf, depth, horizon, budget);
    else
        out = complement_bounds(std::get<ComplementFamily>(family), depth, horizon, budget);
    // Bounds stay certified under outward decimal rounding and become
    // printable; exact level data remains available via exact_level_measures.
    out.lower = round_down(out.lower);
    out.upper = std::min(Rational(1), round_up(out.upper));
    if (out.lower < 0) out.lower = 0;
    return out;
}

} // namespace ostro
