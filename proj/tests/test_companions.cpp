#include <doctest.h>

#include "ostro/companions.hpp"
#include "ostro/errors.hpp"
#include "ostro/sampler.hpp"

using namespace ostro;

namespace {

std::vector<Integer> ints(std::initializer_list<long> vs) {
    std::vector<Integer> out;
    for (long v : vs) out.emplace_back(v);
    return out;
}

} // namespace

TEST_CASE("continued fraction expansion of worked rationals") {
    CFDigits a = cf_expand(make_rational(2, 5), 32);
    CHECK(a.a == ints({2, 2}));
    CHECK(a.terminated);
    CHECK(cf_evaluate(a) == make_rational(2, 5));

    CHECK(cf_expand(make_rational(1, 3), 32).a == ints({3}));
    CHECK(cf_expand(make_rational(5, 11), 32).a == ints({2, 5}));
}

TEST_CASE("cf round trip on random rationals") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        unsigned long q = rng.next() % 100000 + 2;
        unsigned long p = rng.next() % (q - 1) + 1;
        Rational x = make_rational(Integer(p), Integer(q));
        CFDigits cf = cf_expand(x, 64);
        REQUIRE(cf.terminated);
        CHECK(cf_evaluate(cf) == x);
        // convergents alternate around the value
        auto conv = cf_convergents(cf);
        for (std::size_t n = 1; n < conv.size(); ++n) {
            Rational approx = make_rational(conv[n - 1].first, conv[n - 1].second);
            if (n % 2 == 1)
                CHECK(approx >= x);
            else
                CHECK(approx <= x);
        }
    }
}

TEST_CASE("cf cylinder child ratios sit inside the classical bounds") {
    // exact bounds: 1/(3 i^2) <= ratio <= 2/(i (i+1)) <= 2/i^2; the lower end
    // is attained at base (1), i = 1
    SplitMix64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Integer> base;
        int len = 1 + static_cast<int>(rng.next() % 4);
        for (int i = 0; i < len; ++i) base.emplace_back(rng.next() % 8 + 1);
        Integer i(rng.next() % 12 + 1);
        Rational ratio = cf_child_ratio(base, i);
        CHECK(ratio >= unit_fraction(3 * i * i));
        CHECK(ratio <= make_rational(2, i * (i + 1)));
    }
    CHECK(cf_child_ratio({Integer(1)}, Integer(1)) == make_rational(1, 3));
}

TEST_CASE("pierce expansion of worked rationals") {
    PierceDigits p = pierce_expand(make_rational(2, 5), 32);
    CHECK(p.q == ints({2, 5}));
    CHECK(p.terminated);
    CHECK(pierce_evaluate(p) == make_rational(2, 5));

    CHECK(pierce_expand(make_rational(1, 2), 32).q == ints({2}));
    CHECK(pierce_expand(make_rational(1, 3), 32).q == ints({3}));
}

TEST_CASE("pierce digits strictly increase and difference form telescopes") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        unsigned long q = rng.next() % 100000 + 2;
        unsigned long p = rng.next() % (q - 1) + 1;
        Rational x = make_rational(Integer(p), Integer(q));
        PierceDigits digits = pierce_expand(x, 64);
        REQUIRE(digits.terminated);
        CHECK(pierce_evaluate(digits) == x);
        Integer acc(0);
        for (std::size_t k = 0; k < digits.q.size(); ++k) {
            if (k > 0) CHECK(digits.q[k] > digits.q[k - 1]);
            CHECK(digits.g[k] >= 1);
            acc += digits.g[k];
            CHECK(acc == digits.q[k]); // q_n = g_1 + ... + g_n
        }
    }
}

TEST_CASE("pierce growth roots") {
    PierceDigits p;
    p.q = ints({2, 5});
    p.g = ints({2, 3});
    auto stats = pierce_growth_stat(p, 12);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].bracket.contains(Rational(2)));
    // sqrt(5) in [2.236, 2.2361]
    CHECK(stats[1].bracket.lo > make_rational(2236, 1000));
    CHECK(stats[1].bracket.hi < make_rational(22361, 10000));

    PierceDigits q12;
    q12.q = ints({1, 2});
    q12.g = ints({1, 1});
    auto s2 = pierce_growth_stat(q12, 12);
    CHECK(s2[0].bracket.contains(Rational(1)));
    CHECK(s2[1].bracket.lo > make_rational(14142, 10000));
    CHECK(s2[1].bracket.hi < make_rational(14143, 10000));
}

TEST_CASE("gauss digit frequencies") {
    GaussFrequency f1 = gauss_frequency(Integer(1));
    CHECK(f1.bracket.lo > make_rational(41503, 100000));
    CHECK(f1.bracket.hi < make_rational(41505, 100000));

    GaussFrequency f2 = gauss_frequency(Integer(2));
    CHECK(f2.bracket.lo > make_rational(16992, 100000));
    CHECK(f2.bracket.hi < make_rational(16994, 100000));

    // telescoping: sum over i <= N collapses to log2(2(N+1)/(N+2)) -> 1
    long n = 1000000;
    RationalInterval total =
        log2_ratio_interval(make_rational(2 * (n + 1), n + 2), 256);
    CHECK(total.hi < 1);
    CHECK(total.lo > Rational(1) - make_rational(1, 100000));

    // additivity spot check at small N: per-digit brackets sum to the product form
    Rational lo_sum(0), hi_sum(0);
    for (long i = 1; i <= 100; ++i) {
        GaussFrequency f = gauss_frequency(Integer(i));
        lo_sum += f.bracket.lo;
        hi_sum += f.bracket.hi;
    }
    RationalInterval closed = log2_ratio_interval(make_rational(2 * 101, 102), 256);
    CHECK(lo_sum <= closed.hi);
    CHECK(hi_sum >= closed.lo);
}

TEST_CASE("digit transfer maps") {
    BarO2Digits d;
    d.d = ints({2, 5});
    d.terminated = true;
    TransferImage cf_img = transfer_map(d, TransferTarget::ContinuedFraction);
    CHECK(cf_img.point);
    CHECK(cf_img.interval.lo == make_rational(5, 11));
    CHECK(cf_img.interval.hi == make_rational(5, 11));

    TransferImage pierce_img = transfer_map(d, TransferTarget::Pierce);
    CHECK(pierce_img.point);
    CHECK(pierce_img.interval.lo == make_rational(3, 7));

    // rank-1 prefixes map to the rank-1 cylinders of the target systems
    for (long i = 1; i <= 6; ++i) {
        BarO2Digits one;
        one.d = ints({i});
        TransferImage cf1 = transfer_map(one, TransferTarget::ContinuedFraction);
        Interval cf_cyl = cf_cylinder(ints({i}));
        CHECK(cf1.interval.lo == cf_cyl.lo);
        CHECK(cf1.interval.hi == cf_cyl.hi);
        TransferImage p1 = transfer_map(one, TransferTarget::Pierce);
        Interval p_cyl = pierce_cylinder(ints({i}));
        CHECK(p1.interval.lo == p_cyl.lo);
        CHECK(p1.interval.hi == p_cyl.hi);
    }
}

TEST_CASE("transfer maps preserve the cylinder order") {
    // enumerate all digit strings of length <= 3 over {1,2,3}, ordered by
    // their source-cylinder position, and check both targets keep the order
    std::vector<std::vector<Integer>> strings;
    for (long a = 1; a <= 3; ++a)
        for (long b = 1; b <= 3; ++b) strings.push_back(ints({a, b}));

    auto source_pos = [](const std::vector<Integer>& s) -> Rational {
        BarO2Digits d;
        d.d = s;
        Cylinder cyl = cylinder_interval(d);
        return (cyl.inf + cyl.sup) / 2;
    };
    auto target_pos = [](const std::vector<Integer>& s, TransferTarget t) -> Rational {
        BarO2Digits d;
        d.d = s;
        TransferImage img = transfer_map(d, t);
        return (img.interval.lo + img.interval.hi) / 2;
    };

    for (std::size_t i = 0; i < strings.size(); ++i) {
        for (std::size_t j = 0; j < strings.size(); ++j) {
            if (source_pos(strings[i]) < source_pos(strings[j])) {
                CHECK(target_pos(strings[i], TransferTarget::ContinuedFraction) <
                      target_pos(strings[j], TransferTarget::ContinuedFraction));
                CHECK(target_pos(strings[i], TransferTarget::Pierce) <
                      target_pos(strings[j], TransferTarget::Pierce));
            }
        }
    }
}

TEST_CASE("rank-1 geometry agrees across systems on terminating rationals") {
    for (long i = 2; i <= 8; ++i) {
        Rational x = make_rational(1, i);
        CHECK(evaluate_o2(remez_expand(x, 8)) == x);
        CHECK(cf_evaluate(cf_expand(x, 8)) == x);
        CHECK(pierce_evaluate(pierce_expand(x, 8)) == x);
    }
}
