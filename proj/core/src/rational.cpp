#include "mixflow/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <ostream>

namespace mixflow {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v, const char* ctx) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw OverflowError(std::string("rational overflow in ") + ctx);
    }
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator)
    : num_(numerator), den_(denominator) {
    if (den_ == 0) throw std::invalid_argument("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    i128 n = i128(num_) * rhs.den_ + i128(rhs.num_) * den_;
    i128 d = i128(den_) * rhs.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n, "add");
    den_ = narrow(d, "add");
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    i128 n = i128(num_) * rhs.num_;
    i128 d = i128(den_) * rhs.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n, "mul");
    den_ = narrow(d, "mul");
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
    return *this *= rhs.reciprocal();
}

std::strong_ordering Rational::operator<=>(const Rational& rhs) const {
    i128 lhsv = i128(num_) * rhs.den_;
    i128 rhsv = i128(rhs.num_) * den_;
    if (lhsv < rhsv) return std::strong_ordering::less;
    if (lhsv > rhsv) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::reciprocal() const {
    if (num_ == 0) throw std::domain_error("reciprocal of zero");
    return Rational(den_, num_);
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

bool Rational::is_multiple_of(const Rational& step) const {
    if (step.num_ <= 0) throw std::domain_error("is_multiple_of needs a positive step");
    // (num/den) / (sn/sd) = num*sd / (den*sn) must be an integer.
    i128 n = i128(num_) * step.den_;
    i128 d = i128(den_) * step.num_;
    return n % d == 0;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::decimal(int digits) const {
    i128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    i128 scaled = i128(num_) * scale / den_; // truncates towards zero
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string raw;
    if (scaled == 0) raw = "0";
    while (scaled > 0) {
        raw.insert(raw.begin(), char('0' + int(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(raw.size()) <= digits) raw.insert(raw.begin(), '0');
    std::string out = raw.substr(0, raw.size() - digits);
    if (digits > 0) out += "." + raw.substr(raw.size() - digits);
    if (neg && out.find_first_not_of("0.") != std::string::npos) out.insert(out.begin(), '-');
    return out;
}

Rational Rational::parse(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw ParseError("empty rational literal");

    auto parse_int = [](const std::string& t) -> std::int64_t {
        if (t.empty() || (t.size() == 1 && (t[0] == '+' || t[0] == '-'))) {
            throw ParseError("bad integer literal '" + t + "'");
        }
        std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        for (; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
                throw ParseError("bad integer literal '" + t + "'");
            }
        }
        try {
            return std::stoll(t);
        } catch (const std::exception&) {
            throw ParseError("integer literal out of range '" + t + "'");
        }
    };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::int64_t n = parse_int(s.substr(0, slash));
        std::int64_t d = parse_int(s.substr(slash + 1));
        if (d == 0) throw ParseError("zero denominator in '" + text + "'");
        return Rational(n, d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (fp.empty()) throw ParseError("bad decimal literal '" + text + "'");
        bool neg = !ip.empty() && ip[0] == '-';
        if (ip.empty() || ip == "-" || ip == "+") ip += "0";
        std::int64_t whole = parse_int(ip);
        std::int64_t frac = parse_int(fp);
        if (frac < 0) throw ParseError("bad decimal literal '" + text + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) {
            if (scale > std::numeric_limits<std::int64_t>::max() / 10) {
                throw ParseError("decimal literal too precise '" + text + "'");
            }
            scale *= 10;
        }
        Rational r = Rational(whole) + (neg ? -Rational(frac, scale) : Rational(frac, scale));
        return r;
    }
    return Rational(parse_int(s));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::int64_t ceil_div(const Rational& a, const Rational& b) {
    if (b <= Rational(0)) throw std::domain_error("ceil_div needs a positive divisor");
    return (a / b).ceil();
}

Rational pow2(int exp) {
    if (exp < 0 || exp > 62) throw std::domain_error("pow2 exponent out of range");
    return Rational(std::int64_t(1) << exp);
}

} // namespace mixflow
