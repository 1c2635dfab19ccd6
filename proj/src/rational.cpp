#include "gifs/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace gifs {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Rational rational_parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_token(text)) throw ParseError("malformed rational: '" + text + "'");
        return Rational(BigInt(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-' || den[0] == '+')
        throw ParseError("malformed rational: '" + text + "'");
    BigInt d(den);
    if (d == 0) throw ParseError("zero denominator: '" + text + "'");
    return Rational(BigInt(num), d);
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite double");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);          // x = mant * 2^exp, |mant| in [0.5, 1)
    auto scaled = static_cast<long long>(std::ldexp(mant, 53));  // exact 53-bit integer
    exp -= 53;
    Rational r(scaled);
    if (exp > 0)
        r *= rational_pow(Rational(2), exp);
    else if (exp < 0)
        r /= rational_pow(Rational(2), -exp);
    return r;
}

Rational rational_pow(const Rational& r, long long k) {
    if (k == 0) return Rational(1);
    if (r == 0 && k < 0) throw std::domain_error("0 to negative power");
    bool inv = k < 0;
    unsigned long long e = inv ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
    Rational base = r, acc(1);
    while (e > 0) {
        if (e & 1ULL) acc *= base;
        base *= base;
        e >>= 1ULL;
    }
    return inv ? Rational(1) / acc : acc;
}

}  // namespace gifs
