#ifndef OSTRO_SEQ_EXPR_HPP
#define OSTRO_SEQ_EXPR_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ostro/rational.hpp"

namespace ostro::seq {

// Expression tree over one integer variable with +, -, *, ^ and integer
// literals.  Small and immutable; shared_ptr keeps subtrees cheap to pass.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Const, Var, Add, Sub, Mul, Pow };
    Kind kind = Kind::Const;
    Integer value; // Const only
    ExprPtr lhs;
    ExprPtr rhs;
};

ExprPtr make_const(Integer v);
ExprPtr make_var();
ExprPtr make_node(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs);

// Parses the expression grammar.  `var_name` is the single admissible
// variable ("k" for level-indexed sequences, "m" for removed-value indices).
ExprPtr parse_expr(const std::string& text, const std::string& var_name);

std::string to_string(const ExprPtr& e, const std::string& var_name);

// Exact evaluation at a positive index.  Exponents must be non-negative and
// below the safety cap (results stay well under the big-integer budget).
Integer eval(const ExprPtr& e, long k);

inline constexpr unsigned long kMaxExponent = 1ul << 26;

// --- exact structural forms -------------------------------------------------

// Dense integer polynomial, used both as a growth form and as the exponent
// carrier of the exponential forms.
struct Poly {
    std::vector<Integer> c; // c[i] * x^i; normalized, no trailing zeros

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Integer eval(const Integer& x) const;
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
// P(x + delta)
Poly poly_shift(const Poly& p, long delta);
// P(x+1) - P(x)
Poly poly_delta(const Poly& p);

// v(k) = mult * base^(expo(k)), base >= 2, mult >= 1.
struct ExpForm {
    Integer mult;
    Integer base;
    Poly expo;
};

// v(k) = mult * base^( g * inner^(s k + t) + h ), base,inner >= 2, g,s >= 1.
struct DoubExpForm {
    Integer mult;
    Integer base;
    Integer g;
    Integer inner;
    long s = 1;
    long t = 0;
    Integer h;
};

enum class GrowthClass {
    Zero,              // identically 0 (tail families allow it)
    Polynomial,        // includes constants
    Exponential,       // a^(affine), ratio exactly a^s
    ExpPolynomial,     // a^(poly deg >= 2)
    DoublyExponential, // a^(g c^(sk+t) + h)
    Unclassified,
};

struct Growth {
    GrowthClass cls = GrowthClass::Unclassified;
    std::optional<Poly> poly;
    std::optional<ExpForm> exp;
    std::optional<DoubExpForm> dexp;
};

Growth classify(const ExprPtr& e);

// --- certified facts --------------------------------------------------------

// Smallest K (certified) with: for all k >= K, P(k) > 0, P(k+1) > P(k) and
// P(k+1) <= 2 P(k).  Root-free beyond a Cauchy bound.  nullopt when the
// leading coefficient is not positive.
std::optional<long> poly_tame_from(const Poly& p);

// Certifies: for all k >= k0, mult * base^(Q(k)) <= rhs_base^(2^k).
// Exact check at k0 plus induction on the finite-difference exponent.
bool certify_exp_le_tower(const Integer& mult, const Integer& base, const Poly& q,
                          const Integer& rhs_base, long k0);

// Certifies: for all k >= k0, poly(k) is positive and <= rhs_base^(2^k).
bool certify_poly_le_tower(const Poly& p, const Integer& rhs_base, long k0);

// Exact value of base^(2^k); guarded by the exponent cap.
Integer tower(const Integer& base, long k);

} // namespace ostro::seq

#endif
