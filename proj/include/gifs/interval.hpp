#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "gifs/rational.hpp"

namespace gifs {

// Closed float interval [lo, hi]. Every operation widens outward by one
// ulp so the result always encloses the exact value.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double v) : lo(v), hi(v) {}
    Interval(double l, double h) : lo(l), hi(h) {}

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

namespace detail {
inline double dn(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
}  // namespace detail

inline Interval iv_add(const Interval& a, const Interval& b) {
    return {detail::dn(a.lo + b.lo), detail::up(a.hi + b.hi)};
}

inline Interval iv_sub(const Interval& a, const Interval& b) {
    return {detail::dn(a.lo - b.hi), detail::up(a.hi - b.lo)};
}

inline Interval iv_mul(const Interval& a, const Interval& b) {
    const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {detail::dn(std::min({c[0], c[1], c[2], c[3]})),
            detail::up(std::max({c[0], c[1], c[2], c[3]}))};
}

inline Interval iv_neg(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval iv_hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval iv_abs(const Interval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

/// Certified lower bound on the distance between any point of interval a
/// and any point of interval b (0 when they overlap).
inline double iv_gap_lower(const Interval& a, const Interval& b) {
    double g = std::max(a.lo - b.hi, b.lo - a.hi);
    return g > 0 ? detail::dn(g) : 0.0;
}

/// Enclosure of an exact rational.
inline Interval iv_from_rational(const Rational& r) {
    double d = to_double(r);
    if (rational_from_double(d) == r) return Interval(d);
    return {detail::dn(d), detail::up(d)};
}

}  // namespace gifs
