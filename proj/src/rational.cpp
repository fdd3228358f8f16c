#include "ostro/rational.hpp"

#include <cctype>

namespace ostro {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = (s[0] == '-');
        s = s.substr(1);
    }
    if (s.empty()) throw DomainError("empty rational literal");

    Rational value;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw DomainError("malformed rational literal: " + text);
        Integer n(num), d(den);
        if (d == 0) throw DomainError("zero denominator: " + text);
        value = make_rational(n, d);
    } else {
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            if (!all_digits(s)) throw DomainError("malformed rational literal: " + text);
            value = Rational(Integer(s));
        } else {
            // Decimal literal converted exactly as written: 0.4 -> 4/10 -> 2/5.
            std::string whole = s.substr(0, dot);
            std::string frac  = s.substr(dot + 1);
            if (whole.empty()) whole = "0";
            if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
                throw DomainError("malformed rational literal: " + text);
            Integer scaled(whole + frac);
            value = make_rational(scaled, ipow(Integer(10), frac.size()));
        }
    }
    if (negative) value = -value;
    return value;
}

std::string to_fraction_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational round_down(const Rational& x, int digits) {
    for (int d = digits; d <= 1 << 16; d *= 2) {
        Integer scale = ipow(Integer(10), static_cast<unsigned long>(d));
        Integer floored = floor_rational(x * Rational(scale));
        if (sgn(x) > 0 && floored == 0) continue; // keep positivity
        return make_rational(floored, scale);
    }
    return x;
}

Rational round_up(const Rational& x, int digits) {
    Integer scale = ipow(Integer(10), static_cast<unsigned long>(digits));
    return make_rational(ceil_rational(x * Rational(scale)), scale);
}

} // namespace ostro
