#include "ostro/sampler.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "ostro/errors.hpp"
#include "ostro/seq_expr.hpp"

namespace ostro {

Rational SplitMix64::uniform128() {
    Integer num(static_cast<unsigned long>(next()));
    num <<= 64;
    num += Integer(static_cast<unsigned long>(next()));
    return make_rational(num, pow2(128));
}

std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t index) {
    SplitMix64 mixer(base_seed ^ (0xA0761D6478BD642Full * (index + 1)));
    return mixer.next();
}

// --- digit laws ---------------------------------------------------------------

DigitLaw DigitLaw::geometric(const Rational& ratio) {
    DigitLaw law;
    law.ratio_ = ratio;
    law.validate();
    return law;
}

DigitLaw DigitLaw::finite(std::vector<Rational> probabilities) {
    DigitLaw law;
    law.head_ = std::move(probabilities);
    law.validate();
    return law;
}

DigitLaw DigitLaw::finite_with_tail(std::vector<Rational> probabilities, const Rational& ratio) {
    DigitLaw law;
    law.head_ = std::move(probabilities);
    law.ratio_ = ratio;
    law.validate();
    return law;
}

DigitLaw DigitLaw::point_mass(const Integer& atom) {
    if (atom < 1) throw InvalidLaw("atom must be a positive digit");
    std::vector<Rational> p(static_cast<std::size_t>(atom.get_ui()), Rational(0));
    p.back() = Rational(1);
    return finite(std::move(p));
}

void DigitLaw::validate() const {
    Rational sum(0);
    for (const Rational& p : head_) {
        if (sgn(p) < 0) throw InvalidLaw("negative probability");
        sum += p;
    }
    if (ratio_) {
        if (sgn(*ratio_) <= 0 || *ratio_ >= 1)
            throw InvalidLaw("geometric ratio must lie in (0,1)");
        if (sum > 1) throw InvalidLaw("head probabilities exceed 1");
        if (head_.empty() && sum != 0) throw InvalidLaw("inconsistent head");
        // tail mass (1 - sum) is spread geometrically; sums to 1 exactly
    } else {
        if (sum != 1) throw InvalidLaw("probabilities must sum to 1 exactly, got " +
                                       to_fraction_string(sum));
        if (head_.empty()) throw InvalidLaw("empty law");
    }
}

DigitLaw DigitLaw::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidLaw("expected 'kind:parameters': " + text);
    std::string kind = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    if (kind == "geometric") return geometric(parse_rational(rest));
    if (kind == "point") return point_mass(Integer(rest));
    if (kind == "finite") {
        std::optional<std::string> tail_text;
        auto semi = rest.find(';');
        if (semi != std::string::npos) {
            std::string t = rest.substr(semi + 1);
            const std::string key = "tail=";
            if (t.rfind(key, 0) != 0) throw InvalidLaw("expected 'tail=' after ';'");
            tail_text = t.substr(key.size());
            rest = rest.substr(0, semi);
        }
        std::vector<Rational> probs;
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) probs.push_back(parse_rational(item));
        if (tail_text) return finite_with_tail(std::move(probs), parse_rational(*tail_text));
        return finite(std::move(probs));
    }
    throw InvalidLaw("unknown law kind '" + kind + "'");
}

std::string DigitLaw::to_string() const {
    if (head_.empty() && ratio_) return "geometric:" + to_fraction_string(*ratio_);
    std::string s = "finite:";
    for (std::size_t i = 0; i < head_.size(); ++i) {
        if (i) s += ",";
        s += to_fraction_string(head_[i]);
    }
    if (ratio_) s += ";tail=" + to_fraction_string(*ratio_);
    return s;
}

Rational DigitLaw::pmf(const Integer& m) const {
    if (m < 1) return Rational(0);
    Integer n(head_.size());
    if (m <= n) return head_[static_cast<std::size_t>(m.get_ui()) - 1];
    if (!ratio_) return Rational(0);
    // tail mass spread geometrically over m = n+1, n+2, ...
    Rational head_sum(0);
    for (const Rational& p : head_) head_sum += p;
    Rational tail_mass = Rational(1) - head_sum;
    Integer offset = m - n; // >= 1
    if (!offset.fits_ulong_p()) throw DomainError("digit too large for pmf");
    return tail_mass * (Rational(1) - *ratio_) * rpow(*ratio_, offset.get_ui() - 1);
}

Rational DigitLaw::cdf(const Integer& m) const {
    if (m < 1) return Rational(0);
    Integer n(head_.size());
    if (m <= n) {
        Rational sum(0);
        for (std::size_t i = 0; i < m.get_ui(); ++i) sum += head_[i];
        return sum;
    }
    if (!ratio_) return Rational(1);
    Rational head_sum(0);
    for (const Rational& p : head_) head_sum += p;
    Rational tail_mass = Rational(1) - head_sum;
    Integer offset = m - n;
    if (!offset.fits_ulong_p()) throw DomainError("digit too large for cdf");
    return head_sum + tail_mass * (Rational(1) - rpow(*ratio_, offset.get_ui()));
}

Rational DigitLaw::tail(const Integer& m) const { return Rational(1) - cdf(m); }

Integer DigitLaw::sample(const Rational& u) const {
    // smallest m with cdf(m) > u
    Rational acc(0);
    Integer n(head_.size());
    for (std::size_t i = 0; i < head_.size(); ++i) {
        acc += head_[i];
        if (acc > u) return Integer(i + 1);
    }
    if (!ratio_) return n; // u beyond the head only when sum == 1 and u == 1-eps ties
    // head exhausted; find smallest j >= 1 with tail cdf above u
    Rational tail_mass = Rational(1) - acc;
    Rational power(1);
    Integer j(0);
    for (;;) {
        j += 1;
        power *= *ratio_;
        // cdf(n + j) = acc + tail_mass (1 - ratio^j)
        if (acc + tail_mass * (Rational(1) - power) > u) return n + j;
        if (j > 1 << 20) throw DomainError("law sampling did not terminate");
    }
}

Integer DigitLaw::mode() const {
    Integer best(1);
    Rational best_p = pmf(Integer(1));
    for (std::size_t i = 2; i <= head_.size() + 1; ++i) {
        Rational p = pmf(Integer(i));
        if (p > best_p) {
            best_p = p;
            best = Integer(i);
        }
    }
    return best;
}

// --- samplers -----------------------------------------------------------------

SampledPath lebesgue_digit_sample(std::uint64_t seed, int depth) {
    if (depth < 1 || depth > 26) throw DomainError("depth must be in [1, 26]");
    SplitMix64 rng(seed);
    SampledPath path;
    path.law = PathLaw::Lebesgue;
    path.law_text = "lebesgue";
    path.seed = seed;
    path.depth = depth;
    path.digits.d.reserve(static_cast<std::size_t>(depth));

    // One big multiplication per level: C' = c'(c'+1) with c' = C - 1 + j.
    Integer big_c(1); // c(c+1), 1 at the root
    for (int k = 0; k < depth; ++k) {
        Rational u = rng.uniform128();
        // smallest j with j/(C+j) > u, i.e. j = floor(C u / (1-u)) + 1
        Rational threshold = Rational(big_c) * u / (Rational(1) - u);
        Integer j = floor_rational(threshold) + 1;
        path.digits.d.push_back(j);
        if (k + 1 < depth) {
            Integer c_next = big_c - 1 + j;
            big_c = c_next * (c_next + 1);
        }
    }
    return path;
}

SampledPath iid_sample(const DigitLaw& law, std::uint64_t seed, int depth) {
    if (depth < 1) throw DomainError("depth must be >= 1");
    SplitMix64 rng(seed);
    SampledPath path;
    path.law = PathLaw::IID;
    path.law_text = law.to_string();
    path.seed = seed;
    path.depth = depth;
    path.digits.d.reserve(static_cast<std::size_t>(depth));
    for (int k = 0; k < depth; ++k) path.digits.d.push_back(law.sample(rng.uniform128()));
    return path;
}

// --- distribution function ----------------------------------------------------

namespace {

constexpr long kMaxChildIndex = 1l << 20;

RationalInterval cdf_walk(const CylinderFrame& frame, const Rational& mass, const Rational& x,
                          const DigitLaw& law, int depth) {
    if (x >= frame.b) return {mass, mass};
    if (x <= frame.a) return {Rational(0), Rational(0)};
    if (frame.rank >= depth) return {Rational(0), mass};

    const Integer& c = frame.big_c;
    if (!frame.odd) {
        // children j = [a + 1/(C+j), a + 1/(C+j-1)] move left as j grows
        Rational y = Rational(1) / (x - frame.a); // in (C, infinity)
        if (is_integer(y)) {
            Integer jb = y.get_num() - c; // x is inf of child jb
            Rational exact = mass * law.tail(jb);
            return {exact, exact};
        }
        Integer jstar = floor_rational(y) - c + 1;
        if (jstar > kMaxChildIndex) {
            return {Rational(0), mass * law.tail(Integer(kMaxChildIndex))};
        }
        Rational below = mass * law.tail(jstar);
        RationalInterval sub =
            cdf_walk(frame.child(jstar), mass * law.pmf(jstar), x, law, depth);
        return {below + sub.lo, below + sub.hi};
    }
    // odd rank: children j = [b - 1/(C+j-1), b - 1/(C+j)] move right as j grows
    Rational y = Rational(1) / (frame.b - x);
    if (is_integer(y)) {
        Integer jb = y.get_num() - c; // x is sup of child jb
        Rational exact = mass * law.cdf(jb);
        return {exact, exact};
    }
    Integer jstar = floor_rational(y) - c + 1;
    if (jstar > kMaxChildIndex) {
        return {mass * law.cdf(Integer(kMaxChildIndex)), mass};
    }
    Rational below = mass * law.cdf(jstar - 1);
    RationalInterval sub = cdf_walk(frame.child(jstar), mass * law.pmf(jstar), x, law, depth);
    return {below + sub.lo, below + sub.hi};
}

} // namespace

RationalInterval eta_cdf(const Rational& x, const DigitLaw& law, int depth) {
    if (sgn(x) < 0 || x > 1) throw DomainError("eta_cdf requires x in [0,1]");
    if (depth < 1 || depth > 64) throw DomainError("depth must be in [1, 64]");
    return cdf_walk(CylinderFrame::root(), Rational(1), x, law, depth);
}

// --- experiments ----------------------------------------------------------------

std::string LawSpec::to_string() const {
    return kind == PathLaw::Lebesgue ? "lebesgue" : law->to_string();
}

namespace {

SampledPath draw(const LawSpec& spec, std::uint64_t seed, int depth) {
    if (spec.kind == PathLaw::Lebesgue) return lebesgue_digit_sample(seed, depth);
    return iid_sample(*spec.law, seed, depth);
}

template <typename Fn>
void run_paths(int n_paths, int jobs, Fn&& per_path) {
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int i = 0; i < n_paths; ++i) per_path(i);
        return;
    }
    std::vector<std::future<void>> futures;
    int chunk = (n_paths + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
        int begin = w * chunk, end = std::min(n_paths, begin + chunk);
        if (begin >= end) break;
        futures.push_back(std::async(std::launch::async, [&per_path, begin, end] {
            for (int i = begin; i < end; ++i) per_path(i);
        }));
    }
    for (auto& f : futures) f.get();
}

} // namespace

FrequencyReport frequency_experiment(const LawSpec& law, int n_paths, int depth,
                                     const std::vector<Integer>& tracked,
                                     std::uint64_t base_seed, int jobs) {
    FrequencyReport report;
    report.law = law;
    report.n_paths = n_paths;
    report.depth = depth;
    report.tracked = tracked;
    report.paths.resize(static_cast<std::size_t>(n_paths));

    std::vector<long> late_counts(static_cast<std::size_t>(n_paths), 0);
    run_paths(n_paths, jobs, [&](int i) {
        std::uint64_t seed = path_seed(base_seed, static_cast<std::uint64_t>(i));
        SampledPath path = draw(law, seed, depth);
        PathStats stats;
        stats.seed = seed;
        for (const Integer& digit : tracked) {
            long count = 0;
            for (const Integer& d : path.digits.d)
                if (d == digit) ++count;
            stats.counts.emplace_back(digit, count);
            for (std::size_t k = static_cast<std::size_t>(report.envelope_from_position) - 1;
                 k < path.digits.d.size(); ++k)
                if (path.digits.d[k] == digit) ++late_counts[static_cast<std::size_t>(i)];
        }
        for (std::size_t k = 0; k < std::min<std::size_t>(path.digits.d.size(), 6); ++k)
            stats.digits_head.push_back(path.digits.d[k]);
        report.paths[static_cast<std::size_t>(i)] = std::move(stats);
    });

    for (long c : late_counts) report.late_event_count += c;

    for (std::size_t t = 0; t < tracked.size(); ++t) {
        Rational sum(0);
        for (const auto& stats : report.paths)
            sum += make_rational(Integer(stats.counts[t].second), Integer(depth));
        report.mean_frequency.push_back(sum / Rational(n_paths));
    }

    // Union-bound envelope for late events: positions k >= 4 carry mass at
    // most 1/2^(2^(k-2)) per digit; the infinite tail past the cutoff is
    // bounded by twice its first term.
    int cutoff = std::min(depth, 10);
    Rational envelope(0);
    for (int k = report.envelope_from_position; k <= cutoff; ++k)
        envelope += unit_fraction(seq::tower(Integer(2), k - 2));
    if (depth > cutoff) envelope += 2 * unit_fraction(seq::tower(Integer(2), cutoff - 1));
    report.envelope = envelope * Rational(static_cast<long>(tracked.size())) * Rational(n_paths);
    return report;
}

namespace {

struct GroupStats {
    std::vector<Rational> values;
    Rational mean{0};
    Rational variance{0};
};

GroupStats group_frequencies(const LawSpec& spec, const Integer& digit, int n_paths, int depth,
                             std::uint64_t base_seed, std::uint64_t stream_tag, int jobs) {
    GroupStats g;
    g.values.resize(static_cast<std::size_t>(n_paths));
    run_paths(n_paths, jobs, [&](int i) {
        std::uint64_t seed =
            path_seed(base_seed ^ (stream_tag * 0x9E3779B97F4A7C15ull),
                      static_cast<std::uint64_t>(i));
        SampledPath path = draw(spec, seed, depth);
        long count = 0;
        for (const Integer& d : path.digits.d)
            if (d == digit) ++count;
        g.values[static_cast<std::size_t>(i)] = make_rational(Integer(count), Integer(depth));
    });
    for (const Rational& v : g.values) g.mean += v;
    g.mean /= Rational(n_paths);
    if (n_paths > 1) {
        for (const Rational& v : g.values) {
            Rational d = v - g.mean;
            g.variance += d * d;
        }
        g.variance /= Rational(n_paths - 1);
    }
    return g;
}

} // namespace

SeparationReport singularity_diagnostic(const LawSpec& a, const LawSpec& b, int n_paths,
                                        int depth, std::uint64_t base_seed,
                                        const Rational& sigma_threshold, int jobs) {
    if (n_paths < 2) throw DomainError("need at least 2 paths per group");
    SeparationReport report;
    report.group_a = a;
    report.group_b = b;
    report.n_paths = n_paths;
    report.depth = depth;
    report.sigma_threshold = sigma_threshold;

    Integer digit(1);
    if (a.kind == PathLaw::IID)
        digit = a.law->mode();
    else if (b.kind == PathLaw::IID)
        digit = b.law->mode();
    report.digit = digit;

    GroupStats ga = group_frequencies(a, digit, n_paths, depth, base_seed, 1, jobs);
    GroupStats gb = group_frequencies(b, digit, n_paths, depth, base_seed, 2, jobs);
    report.mean_a = ga.mean;
    report.mean_b = gb.mean;
    report.var_a = ga.variance;
    report.var_b = gb.variance;
    report.gap = abs(ga.mean - gb.mean);

    // gap > sigma * sqrt(var_a/n + var_b/n), compared exactly via squares.
    Rational se2 = (ga.variance + gb.variance) / Rational(n_paths);
    report.separation_flag = report.gap * report.gap > sigma_threshold * sigma_threshold * se2;
    if (se2 == 0 && report.gap > 0) report.separation_flag = true;
    return report;
}

} // namespace ostro
