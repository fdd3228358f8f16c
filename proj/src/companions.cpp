#include "ostro/companions.hpp"

#include "ostro/errors.hpp"

namespace ostro {

CFDigits cf_expand(const Rational& x, int max_terms) {
    if (sgn(x) <= 0 || x >= 1) throw DomainError("cf_expand requires x in (0,1)");
    if (max_terms < 1) throw DomainError("max_terms must be >= 1");

    CFDigits out;
    // Euclid on (den, num): x = [0; a1, a2, ...].
    Integer r0 = x.get_den(), r1 = x.get_num();
    while (r1 != 0 && static_cast<int>(out.a.size()) < max_terms) {
        Integer q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        out.a.push_back(q);
        r0 = r1;
        r1 = rem;
    }
    out.terminated = (r1 == 0);
    return out;
}

std::vector<std::pair<Integer, Integer>> cf_convergents(const CFDigits& digits) {
    std::vector<std::pair<Integer, Integer>> out;
    Integer p_prev(1), q_prev(0); // k = -1
    Integer p(0), q(1);           // k = 0
    for (const Integer& a : digits.a) {
        Integer pn = a * p + p_prev;
        Integer qn = a * q + q_prev;
        out.emplace_back(pn, qn);
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
    }
    return out;
}

Rational cf_evaluate(const CFDigits& digits, std::size_t n) {
    if (n > digits.a.size())
        throw IndexError("cf partial over " + std::to_string(n) + " quotients");
    if (n == 0) return Rational(0);
    CFDigits prefix;
    prefix.a.assign(digits.a.begin(), digits.a.begin() + static_cast<long>(n));
    auto conv = cf_convergents(prefix);
    return make_rational(conv.back().first, conv.back().second);
}

Rational cf_evaluate(const CFDigits& digits) { return cf_evaluate(digits, digits.a.size()); }

namespace {

void require_positive(const std::vector<Integer>& digits, const char* what) {
    if (digits.empty()) throw InvalidDigits(std::string(what) + ": empty prefix");
    for (const Integer& d : digits)
        if (d < 1) throw InvalidDigits(std::string(what) + ": digit < 1");
}

} // namespace

Interval cf_cylinder(const std::vector<Integer>& prefix) {
    require_positive(prefix, "cf_cylinder");
    CFDigits digits;
    digits.a = prefix;
    auto conv = cf_convergents(digits);
    Integer pn = conv.back().first, qn = conv.back().second;
    Integer pm(0), qm(1); // convergent n-1 (or the 0/1 seed at rank 1)
    if (conv.size() >= 2) {
        pm = conv[conv.size() - 2].first;
        qm = conv[conv.size() - 2].second;
    }
    Rational end1 = make_rational(pn, qn);
    Rational end2 = make_rational(pn + pm, qn + qm);
    if (end1 <= end2) return {end1, end2};
    return {end2, end1};
}

Rational cf_child_ratio(const std::vector<Integer>& prefix, const Integer& i) {
    if (i < 1) throw DomainError("child index must be >= 1");
    Interval parent = cf_cylinder(prefix);
    std::vector<Integer> child = prefix;
    child.push_back(i);
    Interval sub = cf_cylinder(child);
    return sub.length() / parent.length();
}

PierceDigits pierce_expand(const Rational& x, int max_terms) {
    if (sgn(x) <= 0 || x >= 1) throw DomainError("pierce_expand requires x in (0,1)");
    if (max_terms < 1) throw DomainError("max_terms must be >= 1");

    PierceDigits out;
    // q_k = floor(1/x_k), x_{k+1} = 1 - q_k x_k.
    Rational cur = x;
    while (sgn(cur) != 0 && static_cast<int>(out.q.size()) < max_terms) {
        Integer qk = floor_rational(Rational(1) / cur);
        out.q.push_back(qk);
        cur = Rational(1) - Rational(qk) * cur;
    }
    out.terminated = (sgn(cur) == 0);
    out.g.reserve(out.q.size());
    for (std::size_t k = 0; k < out.q.size(); ++k)
        out.g.push_back(k == 0 ? out.q[0] : Integer(out.q[k] - out.q[k - 1]));
    return out;
}

Rational pierce_evaluate(const PierceDigits& digits, std::size_t n) {
    if (n > digits.q.size())
        throw IndexError("pierce partial over " + std::to_string(n) + " digits");
    Rational sum(0);
    Integer product(1);
    for (std::size_t k = 0; k < n; ++k) {
        product *= digits.q[k];
        Rational term = unit_fraction(product);
        if (k % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

Rational pierce_evaluate(const PierceDigits& digits) {
    return pierce_evaluate(digits, digits.q.size());
}

PierceDigits pierce_from_differences(const std::vector<Integer>& g, bool terminated) {
    require_positive(g, "pierce_from_differences");
    PierceDigits out;
    out.g = g;
    out.terminated = terminated;
    Integer acc(0);
    for (const Integer& gk : g) {
        acc += gk;
        out.q.push_back(acc);
    }
    return out;
}

Interval pierce_cylinder(const std::vector<Integer>& g_prefix) {
    PierceDigits digits = pierce_from_differences(g_prefix, false);
    std::size_t n = digits.q.size();
    Rational partial = pierce_evaluate(digits, n);
    Integer product(1);
    for (const Integer& qk : digits.q) product *= qk;
    // Widest continuation appends q_{n+1} = q_n + 1 and stops there.
    Rational span = unit_fraction(product * (digits.q.back() + 1));
    if (n % 2 == 0) return {partial - span, partial};
    return {partial, partial + span};
}

std::vector<GrowthStat> pierce_growth_stat(const PierceDigits& digits, int digits_precision) {
    if (digits.q.size() < 2) throw DomainError("pierce_growth_stat needs at least 2 digits");
    std::vector<GrowthStat> out;
    out.reserve(digits.q.size());
    for (std::size_t n = 1; n <= digits.q.size(); ++n) {
        GrowthStat stat;
        stat.n = n;
        stat.root = nth_root_decimal(digits.q[n - 1], n, digits_precision);
        stat.bracket = nth_root_interval(digits.q[n - 1], n);
        out.push_back(std::move(stat));
    }
    return out;
}

GaussFrequency gauss_frequency(const Integer& i, int digits_precision) {
    if (i < 1) throw DomainError("gauss_frequency requires i >= 1");
    Rational arg = make_rational((i + 1) * (i + 1), i * (i + 2));
    GaussFrequency out;
    out.bracket = log2_ratio_interval(arg, 64 + digits_precision * 4);
    out.value = to_decimal(out.bracket, digits_precision);
    return out;
}

TransferImage transfer_map(const BarO2Digits& digits, TransferTarget target) {
    validate(digits);
    if (digits.d.empty()) throw InvalidDigits("transfer_map: empty prefix");

    TransferImage img;
    img.point = digits.terminated;
    if (target == TransferTarget::ContinuedFraction) {
        if (digits.terminated) {
            CFDigits cf;
            cf.a = digits.d;
            cf.terminated = true;
            Rational v = cf_evaluate(cf);
            img.interval = {v, v};
        } else {
            img.interval = cf_cylinder(digits.d);
        }
    } else {
        if (digits.terminated) {
            PierceDigits p = pierce_from_differences(digits.d, true);
            Rational v = pierce_evaluate(p);
            img.interval = {v, v};
        } else {
            img.interval = pierce_cylinder(digits.d);
        }
    }
    return img;
}

} // namespace ostro
