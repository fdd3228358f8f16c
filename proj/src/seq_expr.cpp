#include "ostro/seq_expr.hpp"

#include <cctype>

#include "ostro/errors.hpp"

namespace ostro::seq {

ExprPtr make_const(Integer v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Const;
    e->value = std::move(v);
    return e;
}

ExprPtr make_var() {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Var;
    return e;
}

ExprPtr make_node(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

namespace {

// Recursive-descent parser.
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' factor)?          (right associative)
//   atom   := integer | var | '(' expr ')'
class Parser {
public:
    Parser(const std::string& text, const std::string& var) : text_(text), var_(var) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& text_;
    const std::string& var_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (consume('+'))
                e = make_node(Expr::Kind::Add, e, term());
            else if (consume('-'))
                e = make_node(Expr::Kind::Sub, e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            // '*' or juxtaposition like "2m" are both accepted; the family
            // grammar in the docs uses explicit '*' except for 2m-1 style.
            if (consume('*')) {
                e = make_node(Expr::Kind::Mul, e, factor());
            } else {
                char c = peek();
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '(')
                    e = make_node(Expr::Kind::Mul, e, factor());
                else
                    return e;
            }
        }
    }

    ExprPtr factor() {
        ExprPtr base = atom();
        if (consume('^')) return make_node(Expr::Kind::Pow, base, factor());
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return make_const(Integer(text_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name != var_)
                throw ParseError("unknown variable '" + name + "', expected '" + var_ + "'", start);
            return make_var();
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
};

} // namespace

ExprPtr parse_expr(const std::string& text, const std::string& var_name) {
    return Parser(text, var_name).run();
}

std::string to_string(const ExprPtr& e, const std::string& var_name) {
    switch (e->kind) {
        case Expr::Kind::Const: return e->value.get_str();
        case Expr::Kind::Var: return var_name;
        case Expr::Kind::Add:
            return "(" + to_string(e->lhs, var_name) + "+" + to_string(e->rhs, var_name) + ")";
        case Expr::Kind::Sub:
            return "(" + to_string(e->lhs, var_name) + "-" + to_string(e->rhs, var_name) + ")";
        case Expr::Kind::Mul:
            return "(" + to_string(e->lhs, var_name) + "*" + to_string(e->rhs, var_name) + ")";
        case Expr::Kind::Pow:
            return "(" + to_string(e->lhs, var_name) + "^" + to_string(e->rhs, var_name) + ")";
    }
    return "?";
}

Integer eval(const ExprPtr& e, long k) {
    switch (e->kind) {
        case Expr::Kind::Const: return e->value;
        case Expr::Kind::Var: return Integer(k);
        case Expr::Kind::Add: return eval(e->lhs, k) + eval(e->rhs, k);
        case Expr::Kind::Sub: return eval(e->lhs, k) - eval(e->rhs, k);
        case Expr::Kind::Mul: return eval(e->lhs, k) * eval(e->rhs, k);
        case Expr::Kind::Pow: {
            Integer base = eval(e->lhs, k);
            Integer exp = eval(e->rhs, k);
            if (exp < 0) throw ValidityError("negative exponent in sequence expression");
            if (!exp.fits_ulong_p() || exp.get_ui() > kMaxExponent)
                throw ValidityError("exponent exceeds evaluation budget");
            return ipow(base, exp.get_ui());
        }
    }
    throw ValidityError("corrupt expression");
}

// --- polynomial helpers -----------------------------------------------------

namespace {

void normalize(Poly& p) {
    while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
}

constexpr int kMaxPolyDegree = 64;

} // namespace

Integer Poly::eval(const Integer& x) const {
    Integer acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Integer(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    normalize(r);
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Integer(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    normalize(r);
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.c.empty() || b.c.empty()) return {};
    if (a.degree() + b.degree() > kMaxPolyDegree)
        throw ValidityError("polynomial degree exceeds analysis budget");
    Poly r;
    r.c.resize(a.c.size() + b.c.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    normalize(r);
    return r;
}

Poly poly_shift(const Poly& p, long delta) {
    // Horner composition with (x + delta).
    Poly shift;
    shift.c = {Integer(delta), Integer(1)};
    Poly acc;
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
        acc = poly_mul(acc, shift);
        Poly term;
        term.c = {*it};
        acc = poly_add(acc, term);
    }
    return acc;
}

Poly poly_delta(const Poly& p) { return poly_sub(poly_shift(p, 1), p); }

// --- structural matching ----------------------------------------------------

namespace {

std::optional<Poly> try_poly(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const: {
            Poly p;
            if (e->value != 0) p.c = {e->value};
            return p;
        }
        case Expr::Kind::Var: {
            Poly p;
            p.c = {Integer(0), Integer(1)};
            return p;
        }
        case Expr::Kind::Add: {
            auto l = try_poly(e->lhs), r = try_poly(e->rhs);
            if (!l || !r) return std::nullopt;
            return poly_add(*l, *r);
        }
        case Expr::Kind::Sub: {
            auto l = try_poly(e->lhs), r = try_poly(e->rhs);
            if (!l || !r) return std::nullopt;
            return poly_sub(*l, *r);
        }
        case Expr::Kind::Mul: {
            auto l = try_poly(e->lhs), r = try_poly(e->rhs);
            if (!l || !r) return std::nullopt;
            return poly_mul(*l, *r);
        }
        case Expr::Kind::Pow: {
            auto base = try_poly(e->lhs);
            auto exp = try_poly(e->rhs);
            if (!base || !exp) return std::nullopt;
            if (exp->degree() > 0) return std::nullopt; // variable exponent: not a polynomial
            Integer n = exp->c.empty() ? Integer(0) : exp->c[0];
            if (n < 0 || n > kMaxPolyDegree) return std::nullopt;
            Poly acc;
            acc.c = {Integer(1)};
            for (Integer i(0); i < n; ++i) acc = poly_mul(acc, *base);
            return acc;
        }
    }
    return std::nullopt;
}

std::optional<ExpForm> try_exp(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Pow: {
            auto base = try_poly(e->lhs);
            if (!base || base->degree() != 0 || base->c[0] < 2) return std::nullopt;
            auto expo = try_poly(e->rhs);
            if (!expo || expo->degree() < 1) return std::nullopt;
            return ExpForm{Integer(1), base->c[0], *expo};
        }
        case Expr::Kind::Mul: {
            auto lp = try_poly(e->lhs);
            auto rp = try_poly(e->rhs);
            if (lp && lp->degree() == 0 && lp->c.size() == 1 && lp->c[0] >= 1) {
                if (auto rf = try_exp(e->rhs)) {
                    rf->mult *= lp->c[0];
                    return rf;
                }
            }
            if (rp && rp->degree() == 0 && rp->c.size() == 1 && rp->c[0] >= 1) {
                if (auto lf = try_exp(e->lhs)) {
                    lf->mult *= rp->c[0];
                    return lf;
                }
            }
            // a^E1 * a^E2 with the same base folds into one form
            auto lf = try_exp(e->lhs);
            auto rf = try_exp(e->rhs);
            if (lf && rf && lf->base == rf->base) {
                return ExpForm{lf->mult * rf->mult, lf->base, poly_add(lf->expo, rf->expo)};
            }
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

// Matches the exponent of a doubly-exponential form: g * inner^(s k + t) + h.
struct InnerExp {
    Integer g;
    Integer inner;
    long s;
    long t;
    Integer h;
};

std::optional<InnerExp> try_inner_exp(const ExprPtr& e) {
    // Linearize an Add/Sub chain; exactly one exponential term allowed.
    struct Term {
        int sign;
        ExprPtr node;
    };
    std::vector<Term> terms;
    std::vector<Term> stack{{1, e}};
    while (!stack.empty()) {
        Term t = stack.back();
        stack.pop_back();
        if (t.node->kind == Expr::Kind::Add) {
            stack.push_back({t.sign, t.node->lhs});
            stack.push_back({t.sign, t.node->rhs});
        } else if (t.node->kind == Expr::Kind::Sub) {
            stack.push_back({t.sign, t.node->lhs});
            stack.push_back({-t.sign, t.node->rhs});
        } else {
            terms.push_back(t);
        }
    }

    std::optional<ExpForm> exp_term;
    int exp_sign = 1;
    Integer constant(0);
    for (const Term& t : terms) {
        if (auto p = try_poly(t.node); p && p->degree() <= 0) {
            Integer v = p->c.empty() ? Integer(0) : p->c[0];
            constant += t.sign * v;
            continue;
        }
        auto f = try_exp(t.node);
        if (!f || exp_term) return std::nullopt;
        if (f->expo.degree() != 1) return std::nullopt; // inner exponent must be affine
        exp_term = f;
        exp_sign = t.sign;
    }
    if (!exp_term || exp_sign != 1) return std::nullopt;
    const Poly& affine = exp_term->expo;
    Integer slope = affine.c.size() > 1 ? affine.c[1] : Integer(0);
    Integer icept = affine.c.empty() ? Integer(0) : affine.c[0];
    if (slope < 1 || !slope.fits_slong_p() || !icept.fits_slong_p()) return std::nullopt;
    if (exp_term->mult < 1) return std::nullopt;
    return InnerExp{exp_term->mult, exp_term->base, slope.get_si(), icept.get_si(), constant};
}

std::optional<DoubExpForm> try_doubexp(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Pow: {
            auto base = try_poly(e->lhs);
            if (!base || base->degree() != 0 || base->c[0] < 2) return std::nullopt;
            auto inner = try_inner_exp(e->rhs);
            if (!inner) return std::nullopt;
            return DoubExpForm{Integer(1), base->c[0], inner->g,
                               inner->inner, inner->s, inner->t, inner->h};
        }
        case Expr::Kind::Mul: {
            auto lp = try_poly(e->lhs);
            if (lp && lp->degree() == 0 && !lp->c.empty() && lp->c[0] >= 1) {
                if (auto rf = try_doubexp(e->rhs)) {
                    rf->mult *= lp->c[0];
                    return rf;
                }
            }
            auto rp = try_poly(e->rhs);
            if (rp && rp->degree() == 0 && !rp->c.empty() && rp->c[0] >= 1) {
                if (auto lf = try_doubexp(e->lhs)) {
                    lf->mult *= rp->c[0];
                    return lf;
                }
            }
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

} // namespace

Growth classify(const ExprPtr& e) {
    Growth g;
    if (auto p = try_poly(e)) {
        if (p->is_zero()) {
            g.cls = GrowthClass::Zero;
        } else {
            g.cls = GrowthClass::Polynomial;
        }
        g.poly = std::move(*p);
        return g;
    }
    if (auto f = try_exp(e)) {
        g.cls = f->expo.degree() == 1 ? GrowthClass::Exponential : GrowthClass::ExpPolynomial;
        g.exp = std::move(*f);
        return g;
    }
    if (auto d = try_doubexp(e)) {
        if (d->inner < 2) return g; // inner base 1 degenerates; leave unclassified
        g.cls = GrowthClass::DoublyExponential;
        g.dexp = std::move(*d);
        return g;
    }
    return g;
}

// --- certified facts --------------------------------------------------------

namespace {

// Ceiling of the Cauchy root bound 1 + max|c_i| / |lead|; every real root of
// p lies strictly below it.
long cauchy_bound(const Poly& p) {
    if (p.degree() <= 0) return 1;
    Integer lead = p.c.back();
    Integer maxc(0);
    for (std::size_t i = 0; i + 1 < p.c.size(); ++i) {
        Integer a = abs(p.c[i]);
        if (a > maxc) maxc = a;
    }
    Rational bound = Rational(1) + make_rational(maxc, abs(lead));
    Integer k = ceil_rational(bound) + 1;
    if (!k.fits_slong_p()) throw ValidityError("polynomial bound overflow");
    return std::max(1l, k.get_si());
}

} // namespace

std::optional<long> poly_tame_from(const Poly& p) {
    if (p.is_zero()) return std::nullopt;
    if (p.degree() == 0) {
        if (p.c[0] <= 0) return std::nullopt;
        return 1; // positive constant: positivity and ratio 1 <= 2; treat as tame
    }
    if (p.c.back() <= 0) return std::nullopt;
    // positivity of P, of P(x+1)-P(x), and of 2P(x)-P(x+1), all past their
    // Cauchy bounds; each has positive leading coefficient.
    Poly growth = poly_delta(p);
    Poly ratio2 = poly_sub(poly_add(p, p), poly_shift(p, 1));
    long k0 = cauchy_bound(p);
    k0 = std::max(k0, cauchy_bound(growth));
    k0 = std::max(k0, cauchy_bound(ratio2));
    if (!growth.c.empty() && growth.c.back() <= 0) return std::nullopt;
    if (ratio2.is_zero() || ratio2.c.back() <= 0) return std::nullopt;
    return k0;
}

Integer tower(const Integer& base, long k) {
    if (k < 0) throw ValidityError("negative tower level");
    if (k > 24) throw ValidityError("tower exponent exceeds budget");
    return ipow(base, 1ul << static_cast<unsigned long>(k));
}

bool certify_exp_le_tower(const Integer& mult, const Integer& base, const Poly& q,
                          const Integer& rhs_base, long k0) {
    if (base < 1 || rhs_base < 2 || mult < 1 || k0 < 0 || k0 > 20) return false;
    // Exact comparison at k0; negative exponents put the power below 1.
    Integer e = q.eval(Integer(k0));
    Integer rhs = tower(rhs_base, k0);
    if (e >= 0) {
        if (!e.fits_ulong_p() || e.get_ui() > kMaxExponent) return false;
        if (mult * ipow(base, e.get_ui()) > rhs) return false;
    } else {
        // mult * base^e <= mult <= rhs ?
        if (mult > rhs) return false;
    }
    if (q.degree() <= 0) return true; // constant exponent, rhs tower grows
    // Induction: mult base^{Q(k+1)} = (mult base^{Q(k)}) * base^{dQ(k)}
    //            <= rhs^{2^k} * rhs^{2^k} = rhs^{2^{k+1}}.
    return certify_exp_le_tower(Integer(1), base, poly_delta(q), rhs_base, k0);
}

bool certify_poly_le_tower(const Poly& p, const Integer& rhs_base, long k0) {
    if (rhs_base < 2 || k0 < 0 || k0 > 20) return false;
    auto tame = poly_tame_from(p);
    if (!tame || k0 < *tame) return false;
    Integer lhs = p.eval(Integer(k0));
    if (lhs <= 0 || lhs > tower(rhs_base, k0)) return false;
    // p(k+1) <= 2 p(k) <= rhs^{2^k} p(k) <= rhs^{2^{k+1}} once p(k) fits.
    return true;
}

} // namespace ostro::seq
