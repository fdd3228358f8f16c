#ifndef OSTRO_FAMILY_HPP
#define OSTRO_FAMILY_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ostro/rational.hpp"
#include "ostro/seq_expr.hpp"

namespace ostro {

// A positive-integer sequence indexed from 1.  Expression-backed sequences
// carry their growth classification for the certified convergence tests;
// value-backed ones (constructed programmatically) may declare a halving
// certificate that the criteria verify against the computed window.
class Sequence {
public:
    static Sequence from_expr(seq::ExprPtr expr, std::string source);
    static Sequence from_values(std::vector<Integer> values, std::string label);

    // Value-backed sequences whose defining construction guarantees that the
    // relevant criterion terms halve forever (used for families defined by a
    // recursion on the criterion itself).
    void declare_halving_from(long k0);

    Integer at(long k) const; // 1-based
    const std::string& source() const { return source_; }
    const std::optional<seq::Growth>& growth() const { return growth_; }
    std::optional<long> declared_halving() const { return declared_halving_from_; }
    bool is_expr() const { return expr_ != nullptr; }

private:
    seq::ExprPtr expr_;
    std::vector<Integer> values_;
    std::string source_;
    std::optional<seq::Growth> growth_;
    std::optional<long> declared_halving_from_;
};

// V_k = { v_k + 1, v_k + 2, ... }; v_k >= 0 (v == 0 leaves the level free).
struct TailFamily {
    Sequence v;
};

// V_k = { 1, ..., m_k }; m_k >= 1.
struct PrefixFamily {
    Sequence m;
};

// V_k = N \ { b_1, b_2, ... } with b strictly increasing, level-independent.
// `gap` is the declared per-level bound d_k on b_{n+1} - b_n; required by the
// zero-measure route.  Families with nothing removed (V_k = N) use
// b = nullopt.
struct ComplementFamily {
    std::optional<Sequence> b;
    std::optional<Sequence> gap;
};

using DigitFamily = std::variant<TailFamily, PrefixFamily, ComplementFamily>;

// Grammar (bit-exact external interface):
//   tail:EXPR(k) | prefix:EXPR(k) | complement:EXPR(m)[;gap=EXPR(k)]
DigitFamily parse_family(const std::string& text);

std::string family_to_string(const DigitFamily& family);

// Smallest admissible digit of level k (1-based).
Integer min_allowed_digit(const DigitFamily& family, long k);

// Membership test for level k.
bool digit_allowed(const DigitFamily& family, long k, const Integer& digit);

// For complement families: removed values b_1..b_n, validated strictly
// increasing; throws ValidityError when the declared gap bound fails on them.
std::vector<Integer> removed_values(const ComplementFamily& family, long count,
                                    long gap_check_levels);

} // namespace ostro

#endif
