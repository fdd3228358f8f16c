#ifndef OSTRO_ERRORS_HPP
#define OSTRO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ostro {

// Input value outside the mathematical domain of an operation (e.g. x not in (0,1)).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Digit sequence violates a structural constraint (growth bound, positivity).
struct InvalidDigits : std::runtime_error {
    explicit InvalidDigits(const std::string& what) : std::runtime_error(what) {}
};

// Index past the end of a finite digit sequence.
struct IndexError : std::out_of_range {
    explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

// Shift applied to a sequence with fewer than two digits.
struct TooShort : std::runtime_error {
    explicit TooShort(const std::string& what) : std::runtime_error(what) {}
};

// Family/expression text does not match the grammar.  `position` is a byte
// offset into the input.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Expression parsed but evaluates outside its declared range (non-positive
// value, violated gap bound, ...).
struct ValidityError : std::runtime_error {
    explicit ValidityError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration would exceed the configured cylinder/size budget.
// `max_depth` is the deepest level that still fits.
struct BudgetExceeded : std::runtime_error {
    int max_depth;
    BudgetExceeded(const std::string& what, int affordable)
        : std::runtime_error(what), max_depth(affordable) {}
};

// Probability vector does not sum to one (or has a negative entry).
struct InvalidLaw : std::runtime_error {
    explicit InvalidLaw(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ostro

#endif
