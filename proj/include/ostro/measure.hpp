#ifndef OSTRO_MEASURE_HPP
#define OSTRO_MEASURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ostro/family.hpp"
#include "ostro/numeric.hpp"
#include "ostro/rational.hpp"

namespace ostro {

enum class SeriesVerdict { Converges, Diverges, Inconclusive };
enum class MeasureVerdict { PositiveCertified, ZeroCertified, Inconclusive };

std::string to_string(SeriesVerdict v);
std::string to_string(MeasureVerdict v);

struct TraceEntry {
    long k = 0;
    Rational term;
    std::string note;
};

// A series test outcome.  Converges/Diverges are only ever reported together
// with a structural certificate; a finite window alone never decides.
struct SeriesReport {
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    std::vector<TraceEntry> trace;
    Rational partial_sum{0};
    std::optional<long> k0; // onset of the certified dominance
    std::string certificate;
};

// Sum v_{k+1} / b^(2^k); convergence for some positive b certifies positive
// Lebesgue measure of the tail-restricted set.
SeriesReport criterion_tail(const TailFamily& family, const Integer& b, int horizon);

// M_1 = m_1, M_{k+1} = (M_k + 1)^2 + m_{k+1}; exact upper envelope of the
// companion values over prefix-family cylinders.
struct MSequence {
    std::vector<Integer> M;
};
MSequence m_sequence(const PrefixFamily& family, int count);

struct PrefixCriteria {
    MeasureVerdict verdict = MeasureVerdict::Inconclusive;
    SeriesReport positivity; // sum M_k^2 / m_{k+1}
    SeriesReport zero;       // sum 2^(2^(k-1)) / (2^(2^(k-1)) + m_{k+1})
    SeriesReport o1_reference; // sum (m_1+...+m_k)/m_{k+1}; trace only
    MSequence M;
    std::string note;
};
PrefixCriteria criterion_prefix(const PrefixFamily& family, int horizon);

struct ComplementCriteria {
    MeasureVerdict verdict = MeasureVerdict::Inconclusive;
    SeriesReport series;
    std::string note;
};
ComplementCriteria criterion_complement(const ComplementFamily& family, int horizon);

// Root-growth test for the Ostrogradsky-Pierce system: lim inf v_k^(1/k) > e
// certifies zero measure of the O1 tail-restricted set.
struct PierceZeroReport {
    MeasureVerdict verdict = MeasureVerdict::Inconclusive; // applies to the O1 system
    std::string certificate;
    std::vector<std::pair<long, Decimal>> roots;
    std::string note;
};
PierceZeroReport pierce_growth_zero_test(const TailFamily& family, int horizon);

struct EnumBudget {
    long max_cylinders = 1'000'000;
    long per_level_children = 32; // truncation width for infinite digit sets
    int jobs = 1;
};

// Certified bounds on the level measures lambda(F_k), plus the per-cylinder
// removed-mass ratio range observed/bounded at each level.
struct LevelMeasure {
    int k = 0;
    RationalInterval f_k;
    std::optional<RationalInterval> removed_ratio;
};
std::vector<LevelMeasure> exact_level_measures(const DigitFamily& family, int depth,
                                               const EnumBudget& budget = {});

struct MeasureBound {
    Rational lower{0};
    Rational upper{1};
    int depth = 0;
    MeasureVerdict verdict = MeasureVerdict::Inconclusive;
    std::string certificate;
    std::string note;
    std::vector<TraceEntry> trace;
};
MeasureBound measure_bounds(const DigitFamily& family, int depth, int horizon,
                            const EnumBudget& budget = {});

// Exposed for tests: upper bound on the removed-mass ratio of the
// squares-complement family inside a cylinder with C = c(c+1), via exact
// truncation plus a certified quartic tail.
struct SquaresRatioBound {
    Rational upper;        // certified when full_cert, else the analytic level bound
    Rational partial;      // exact truncated sum (always a lower bound on the ratio)
    Rational analytic;     // pi-based level bound
    long terms = 0;
    bool full_cert = false;
};
SquaresRatioBound squares_removed_ratio(const Integer& big_c);

} // namespace ostro

#endif
