#include "ostro/family.hpp"

#include "ostro/errors.hpp"

namespace ostro {

Sequence Sequence::from_expr(seq::ExprPtr expr, std::string source) {
    Sequence s;
    s.expr_ = std::move(expr);
    s.source_ = std::move(source);
    s.growth_ = seq::classify(s.expr_);
    return s;
}

Sequence Sequence::from_values(std::vector<Integer> values, std::string label) {
    Sequence s;
    s.values_ = std::move(values);
    s.source_ = std::move(label);
    return s;
}

void Sequence::declare_halving_from(long k0) { declared_halving_from_ = k0; }

Integer Sequence::at(long k) const {
    if (k < 1) throw IndexError("sequence index must be >= 1");
    if (expr_) return seq::eval(expr_, k);
    if (static_cast<std::size_t>(k) > values_.size())
        throw IndexError("value-backed sequence has only " + std::to_string(values_.size()) +
                         " entries, asked for " + std::to_string(k));
    return values_[static_cast<std::size_t>(k - 1)];
}

namespace {

constexpr long kValidationWindow = 8;

void validate_range(const Sequence& s, bool allow_zero, const std::string& what) {
    for (long k = 1; k <= kValidationWindow; ++k) {
        Integer v = s.at(k);
        if (v < 0 || (v == 0 && !allow_zero))
            throw ValidityError(what + " evaluates to " + v.get_str() + " at index " +
                                std::to_string(k));
    }
}

} // namespace

DigitFamily parse_family(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'kind:expression'", 0);
    std::string kind = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);

    if (kind == "tail") {
        auto expr = seq::parse_expr(rest, "k");
        TailFamily fam{Sequence::from_expr(expr, rest)};
        validate_range(fam.v, /*allow_zero=*/true, "tail bound v_k");
        return fam;
    }
    if (kind == "prefix") {
        auto expr = seq::parse_expr(rest, "k");
        PrefixFamily fam{Sequence::from_expr(expr, rest)};
        validate_range(fam.m, /*allow_zero=*/false, "prefix bound m_k");
        return fam;
    }
    if (kind == "complement") {
        std::string b_text = rest;
        std::optional<std::string> gap_text;
        auto semi = rest.find(';');
        if (semi != std::string::npos) {
            b_text = rest.substr(0, semi);
            std::string tail_part = rest.substr(semi + 1);
            const std::string key = "gap=";
            if (tail_part.rfind(key, 0) != 0)
                throw ParseError("expected 'gap=' after ';'", colon + 1 + semi + 1);
            gap_text = tail_part.substr(key.size());
        }
        ComplementFamily fam;
        fam.b = Sequence::from_expr(seq::parse_expr(b_text, "m"), b_text);
        validate_range(*fam.b, /*allow_zero=*/false, "removed value b_m");
        if (gap_text) {
            fam.gap = Sequence::from_expr(seq::parse_expr(*gap_text, "k"), *gap_text);
            validate_range(*fam.gap, /*allow_zero=*/false, "gap bound d_k");
        }
        // strict monotonicity over the validation window (and gap check)
        removed_values(fam, kValidationWindow, kValidationWindow);
        return fam;
    }
    throw ParseError("unknown family kind '" + kind + "'", 0);
}

std::string family_to_string(const DigitFamily& family) {
    if (const auto* t = std::get_if<TailFamily>(&family)) return "tail:" + t->v.source();
    if (const auto* p = std::get_if<PrefixFamily>(&family)) return "prefix:" + p->m.source();
    const auto& c = std::get<ComplementFamily>(family);
    if (!c.b) return "complement:<none>";
    std::string s = "complement:" + c.b->source();
    if (c.gap) s += ";gap=" + c.gap->source();
    return s;
}

Integer min_allowed_digit(const DigitFamily& family, long k) {
    if (const auto* t = std::get_if<TailFamily>(&family)) return t->v.at(k) + 1;
    if (std::get_if<PrefixFamily>(&family)) return Integer(1);
    const auto& c = std::get<ComplementFamily>(family);
    if (!c.b) return Integer(1);
    // first positive integer missing from the increasing removed sequence
    Integer candidate(1);
    for (long m = 1;; ++m) {
        Integer bm = c.b->at(m);
        if (bm > candidate) return candidate;
        if (bm == candidate) candidate += 1;
        if (m > 4096) throw ValidityError("removed sequence covers an implausibly long prefix");
    }
}

bool digit_allowed(const DigitFamily& family, long k, const Integer& digit) {
    if (digit < 1) return false;
    if (const auto* t = std::get_if<TailFamily>(&family)) return digit > t->v.at(k);
    if (const auto* p = std::get_if<PrefixFamily>(&family)) return digit <= p->m.at(k);
    const auto& c = std::get<ComplementFamily>(family);
    if (!c.b) return true;
    for (long m = 1;; ++m) {
        Integer bm = c.b->at(m);
        if (bm == digit) return false;
        if (bm > digit) return true;
    }
}

std::vector<Integer> removed_values(const ComplementFamily& family, long count,
                                    long gap_check_levels) {
    std::vector<Integer> out;
    if (!family.b) return out;
    out.reserve(static_cast<std::size_t>(count));
    for (long m = 1; m <= count; ++m) {
        Integer bm = family.b->at(m);
        if (bm < 1) throw ValidityError("removed value b_" + std::to_string(m) + " < 1");
        if (!out.empty() && bm <= out.back())
            throw ValidityError("removed sequence not strictly increasing at m=" +
                                std::to_string(m));
        out.push_back(bm);
    }
    if (family.gap && out.size() >= 2) {
        Integer max_gap(0);
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            Integer gap = out[i + 1] - out[i];
            if (gap > max_gap) max_gap = gap;
        }
        for (long k = 1; k <= gap_check_levels; ++k) {
            if (max_gap > family.gap->at(k))
                throw ValidityError("declared gap bound violated at level " + std::to_string(k) +
                                    ": observed gap " + max_gap.get_str());
        }
    }
    return out;
}

} // namespace ostro
