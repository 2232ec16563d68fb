#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mixflow {

// Raised when an exact computation would leave the 64-bit range.
struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Exact fraction, always kept in lowest terms with a positive denominator.
// All volume and ratio math in the library goes through this type; floating
// point only ever appears when rendering reports.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t value) : num_(value), den_(1) {}
    Rational(std::int64_t numerator, std::int64_t denominator);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    bool operator==(const Rational& rhs) const { return num_ == rhs.num_ && den_ == rhs.den_; }
    std::strong_ordering operator<=>(const Rational& rhs) const;

    Rational abs() const { return num_ < 0 ? -*this : *this; }
    Rational reciprocal() const;

    // Largest integer <= value / smallest integer >= value.
    std::int64_t floor() const;
    std::int64_t ceil() const;

    // True iff *this is an integer multiple of step (step > 0).
    bool is_multiple_of(const Rational& step) const;

    // "p/q", or just "p" when the denominator is 1.
    std::string str() const;

    // Fixed-point rendering truncated towards zero, e.g. 106/15 -> "7.06".
    std::string decimal(int digits = 2) const;

    // Accepts "p/q", "p", and plain decimals such as "2.5" (parsed exactly).
    static Rational parse(const std::string& text);

private:
    std::int64_t num_;
    std::int64_t den_;

    void normalize();
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// ceil(a / b) for b > 0, computed exactly.
std::int64_t ceil_div(const Rational& a, const Rational& b);

// 2^exp as a rational (exp in [0, 62]).
Rational pow2(int exp);

} // namespace mixflow
