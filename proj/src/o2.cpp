#include "ostro/o2.hpp"

#include "ostro/errors.hpp"

namespace ostro {

void validate(const O2Digits& digits) {
    for (std::size_t k = 0; k < digits.q.size(); ++k) {
        if (digits.q[k] < 1) throw InvalidDigits("O2 digit q_" + std::to_string(k + 1) + " < 1");
        if (k > 0) {
            Integer floor = digits.q[k - 1] * (digits.q[k - 1] + 1);
            if (digits.q[k] < floor)
                throw InvalidDigits("growth constraint violated at q_" + std::to_string(k + 1));
        }
    }
}

void validate(const BarO2Digits& digits) {
    for (std::size_t k = 0; k < digits.d.size(); ++k)
        if (digits.d[k] < 1)
            throw InvalidDigits("bar digit d_" + std::to_string(k + 1) + " < 1");
}

O2Digits remez_expand(const Rational& x, int max_terms) {
    if (sgn(x) <= 0 || x >= 1) throw DomainError("remez_expand requires x in (0,1)");
    if (max_terms < 1) throw DomainError("max_terms must be >= 1");

    O2Digits out;
    // 1 = q1 x + beta1 with 0 <= beta1 < x, so q1 = floor(1/x).
    Integer q1 = floor_rational(Rational(1) / x);
    Rational beta = Rational(1) - Rational(q1) * x;
    Integer product = q1; // q1 q2 ... qk
    out.q.push_back(q1);

    // q_k...q1 = q_{k+1} beta_k + beta_{k+1}, 0 <= beta_{k+1} < beta_k.
    while (sgn(beta) != 0 && static_cast<int>(out.q.size()) < max_terms) {
        Rational ratio = Rational(product) / beta;
        Integer qk = floor_rational(ratio);
        beta = Rational(product) - Rational(qk) * beta;
        product *= qk;
        out.q.push_back(qk);
    }
    out.terminated = (sgn(beta) == 0);
    return out;
}

Rational evaluate_o2(const O2Digits& digits, std::size_t n) {
    if (n > digits.q.size())
        throw IndexError("partial sum over " + std::to_string(n) + " digits, only " +
                         std::to_string(digits.q.size()) + " available");
    Rational sum(0);
    for (std::size_t k = 0; k < n; ++k) {
        Rational term = unit_fraction(digits.q[k]);
        if (k % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

Rational evaluate_o2(const O2Digits& digits) { return evaluate_o2(digits, digits.q.size()); }

BarO2Digits o2_to_bar(const O2Digits& digits) {
    validate(digits);
    BarO2Digits out;
    out.terminated = digits.terminated;
    out.d.reserve(digits.q.size());
    for (std::size_t k = 0; k < digits.q.size(); ++k) {
        if (k == 0) {
            out.d.push_back(digits.q[0]);
        } else {
            out.d.push_back(digits.q[k] - digits.q[k - 1] * (digits.q[k - 1] + 1) + 1);
        }
    }
    return out;
}

CompanionSequence companion_sequence(const BarO2Digits& digits) {
    validate(digits);
    CompanionSequence seq;
    seq.c.reserve(digits.d.size());
    for (std::size_t k = 0; k < digits.d.size(); ++k) {
        if (k == 0) {
            seq.c.push_back(digits.d[0]);
        } else {
            seq.c.push_back(seq.c.back() * (seq.c.back() + 1) - 1 + digits.d[k]);
        }
    }
    return seq;
}

std::pair<O2Digits, CompanionSequence> bar_to_o2(const BarO2Digits& digits) {
    CompanionSequence seq = companion_sequence(digits);
    O2Digits out;
    out.q = seq.c;
    out.terminated = digits.terminated;
    return {std::move(out), std::move(seq)};
}

Cylinder cylinder_interval(const BarO2Digits& base) {
    if (base.d.empty()) throw InvalidDigits("cylinder base must be non-empty");
    Cylinder cyl;
    cyl.base = base;
    cyl.companions = companion_sequence(base);
    cyl.rank = static_cast<int>(base.d.size());
    cyl.odd_rank = (cyl.rank % 2 == 1);

    Rational partial(0);
    for (std::size_t k = 0; k < cyl.companions.size(); ++k) {
        Rational term = unit_fraction(cyl.companions.c[k]);
        if (k % 2 == 0)
            partial += term;
        else
            partial -= term;
    }
    const Integer& cn = cyl.companions.last();
    Rational tail = unit_fraction(cn * (cn + 1));
    if (cyl.odd_rank) {
        cyl.inf = partial - tail;
        cyl.sup = partial;
    } else {
        cyl.inf = partial;
        cyl.sup = partial + tail;
    }
    return cyl;
}

Rational child_ratio(const BarO2Digits& base, const Integer& j) {
    if (base.d.empty()) throw InvalidDigits("child_ratio base must be non-empty");
    if (j < 1) throw DomainError("child index must be >= 1");
    CompanionSequence seq = companion_sequence(base);
    Integer big_c = seq.last() * (seq.last() + 1);
    return make_rational(big_c, (big_c + j - 1) * (big_c + j));
}

BarO2Digits shift(const BarO2Digits& digits) {
    if (digits.d.size() < 2) throw TooShort("shift requires at least 2 digits");
    BarO2Digits out;
    out.terminated = digits.terminated;
    out.d.assign(digits.d.begin() + 1, digits.d.end());
    return out;
}

std::size_t digit_count(const BarO2Digits& digits, const Integer& i, std::size_t n) {
    if (n > digits.d.size())
        throw IndexError("digit_count over " + std::to_string(n) + " digits, only " +
                         std::to_string(digits.d.size()) + " available");
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (digits.d[k] == i) ++count;
    return count;
}

O2Digits alternate_representation(const O2Digits& digits) {
    validate(digits);
    if (!digits.terminated)
        throw InvalidDigits("only terminated expansions have a second representation");
    if (digits.q.empty()) throw InvalidDigits("empty expansion");

    // Replace the final digit a+1 by the pair (a, a(a+1)); the value is
    // unchanged since 1/(a+1) = 1/a - 1/(a(a+1)).
    O2Digits out = digits;
    Integer last = out.q.back();
    Integer a = last - 1;
    if (a < 1) throw InvalidDigits("no alternate representation for q1 = 1");
    if (out.q.size() >= 2) {
        const Integer& prev = out.q[out.q.size() - 2];
        if (a < prev * (prev + 1))
            throw InvalidDigits("alternate form would violate the growth constraint");
    }
    out.q.back() = a;
    out.q.push_back(a * last);
    return out;
}

CylinderFrame CylinderFrame::root() {
    CylinderFrame f;
    f.a = Rational(0);
    f.b = Rational(1);
    f.big_c = 1;
    f.odd = false;
    f.rank = 0;
    return f;
}

CylinderFrame CylinderFrame::child(const Integer& j) const {
    if (j < 1) throw DomainError("child index must be >= 1");
    CylinderFrame f;
    f.rank = rank + 1;
    f.odd = !odd;
    // Raw digit of the child is c' = C - 1 + j; its C-value is c'(c'+1).
    Integer c_child = big_c - 1 + j;
    f.big_c = c_child * (c_child + 1);
    if (odd) {
        // children fill the parent left-to-right as j grows
        f.a = b - unit_fraction(big_c + j - 1);
        f.b = b - unit_fraction(big_c + j);
    } else {
        // children fill the parent right-to-left as j grows
        f.a = a + unit_fraction(big_c + j);
        f.b = a + unit_fraction(big_c + j - 1);
    }
    return f;
}

CylinderFrame to_frame(const Cylinder& cyl) {
    CylinderFrame f;
    f.a = cyl.inf;
    f.b = cyl.sup;
    f.big_c = cyl.companions.last() * (cyl.companions.last() + 1);
    f.odd = cyl.odd_rank;
    f.rank = cyl.rank;
    return f;
}

} // namespace ostro
