#ifndef OSTRO_SAMPLER_HPP
#define OSTRO_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ostro/numeric.hpp"
#include "ostro/o2.hpp"
#include "ostro/rational.hpp"

namespace ostro {

// Deterministic 64-bit generator (SplitMix64).  The whole stream is a pure
// function of the seed, so every sampled object is reproducible bit-for-bit
// across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform dyadic rational u = r / 2^128, r < 2^128.  Inverse-CDF draws
    // compare u against exact rationals; ties have probability < 2^-128.
    Rational uniform128();

private:
    std::uint64_t state_;
};

// Derived per-path seed; documented so multi-path runs are reproducible from
// the base seed alone.
std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t index);

// i.i.d. digit law: finite vector, finite vector with a geometric tail, or a
// pure geometric family.  All probabilities exact; sums to 1 exactly.
class DigitLaw {
public:
    static DigitLaw geometric(const Rational& ratio);
    static DigitLaw finite(std::vector<Rational> probabilities);
    static DigitLaw finite_with_tail(std::vector<Rational> probabilities, const Rational& ratio);
    static DigitLaw point_mass(const Integer& atom);

    // Text forms: "geometric:1/2", "point:3", "finite:1/2,1/4,1/4",
    // "finite:1/2,1/4;tail=1/2".
    static DigitLaw parse(const std::string& text);
    std::string to_string() const;

    Rational pmf(const Integer& m) const;
    // P(d <= m), exact closed form.
    Rational cdf(const Integer& m) const;
    // P(d > m), exact closed form.
    Rational tail(const Integer& m) const;

    Integer sample(const Rational& u) const;

    // Smallest index maximizing the probability mass.
    Integer mode() const;

private:
    std::vector<Rational> head_;
    std::optional<Rational> ratio_; // geometric continuation
    void validate() const;
};

enum class PathLaw { Lebesgue, IID };

struct SampledPath {
    BarO2Digits digits;
    PathLaw law = PathLaw::Lebesgue;
    std::string law_text;
    std::uint64_t seed = 0;
    int depth = 0;
};

// Digits drawn with the exact conditional cylinder-length law
// P(d_{k+1} = j | prefix) = C/((C+j-1)(C+j)), C = c_k(c_k+1); the induced law
// of a rank-n prefix equals the cylinder length exactly.
SampledPath lebesgue_digit_sample(std::uint64_t seed, int depth);

SampledPath iid_sample(const DigitLaw& law, std::uint64_t seed, int depth);

// Distribution function of the random variable with i.i.d. digits: exact
// bracket [lo, hi] of F(x) after walking the cylinder tree to `depth`.
RationalInterval eta_cdf(const Rational& x, const DigitLaw& law, int depth);

// --- experiments -------------------------------------------------------------

struct LawSpec {
    PathLaw kind = PathLaw::Lebesgue;
    std::optional<DigitLaw> law; // present for IID
    std::string to_string() const;
};

struct PathStats {
    std::uint64_t seed = 0;
    std::vector<std::pair<Integer, long>> counts; // tracked digit -> occurrences
    std::vector<Integer> digits_head;             // first few digits, for reports
};

struct FrequencyReport {
    LawSpec law;
    int n_paths = 0;
    int depth = 0;
    std::vector<Integer> tracked;
    std::vector<PathStats> paths;
    std::vector<Rational> mean_frequency;  // per tracked digit, exact
    // Union-bound envelope: sum over k >= from_position of 1/2^(2^(k-2)),
    // one term per tracked digit, scaled by the number of paths.
    Rational envelope;
    int envelope_from_position = 4;
    long late_event_count = 0; // events {d_k = i} with k >= from_position
};

FrequencyReport frequency_experiment(const LawSpec& law, int n_paths, int depth,
                                     const std::vector<Integer>& tracked,
                                     std::uint64_t base_seed, int jobs = 1);

struct SeparationReport {
    LawSpec group_a;
    LawSpec group_b;
    Integer digit;
    int n_paths = 0;
    int depth = 0;
    Rational mean_a, mean_b;
    Rational var_a, var_b; // sample variances, exact
    Rational gap;          // |mean_a - mean_b|
    bool separation_flag = false;
    Rational sigma_threshold{5};
    std::string note;
};

// Frequency-of-mode separation between two digit laws; the flag fires when
// gap^2 > threshold^2 (var_a/n + var_b/n), evaluated exactly.
SeparationReport singularity_diagnostic(const LawSpec& a, const LawSpec& b, int n_paths,
                                        int depth, std::uint64_t base_seed,
                                        const Rational& sigma_threshold = Rational(5),
                                        int jobs = 1);

} // namespace ostro

#endif
