#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gifs {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational scalar. cpp_rational keeps the canonical form
// (positive denominator, gcd 1) after every operation.
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline BigInt rational_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rational_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "a/b" or "a" with integer a and positive integer b.
/// Throws ParseError on malformed text or a zero denominator.
Rational rational_parse(const std::string& text);

/// Exact value of a finite double (every finite double is a rational).
Rational rational_from_double(double x);

/// r^k for integer k (k may be negative, r != 0).
Rational rational_pow(const Rational& r, long long k);

inline std::string rational_str(const Rational& r) { return r.str(); }

}  // namespace gifs
