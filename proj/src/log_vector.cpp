#include "gifs/log_vector.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gifs {

LogVector& LogVector::operator+=(const LogVector& o) {
    for (const auto& [p, e] : o.exponents) {
        auto it = exponents.find(p);
        if (it == exponents.end()) {
            exponents.emplace(p, e);
        } else if ((it->second += e) == 0) {
            exponents.erase(it);
        }
    }
    return *this;
}

LogVector& LogVector::operator-=(const LogVector& o) {
    for (const auto& [p, e] : o.exponents) {
        auto it = exponents.find(p);
        if (it == exponents.end()) {
            exponents.emplace(p, -e);
        } else if ((it->second -= e) == 0) {
            exponents.erase(it);
        }
    }
    return *this;
}

LogVector LogVector::operator+(const LogVector& o) const {
    LogVector r = *this;
    r += o;
    return r;
}

LogVector LogVector::operator-(const LogVector& o) const {
    LogVector r = *this;
    r -= o;
    return r;
}

LogVector LogVector::operator*(std::int64_t k) const {
    LogVector r;
    if (k == 0) return r;
    for (const auto& [p, e] : exponents) r.exponents.emplace(p, e * k);
    return r;
}

double LogVector::value() const {
    double s = 0.0;
    for (const auto& [p, e] : exponents) s += static_cast<double>(e) * std::log(static_cast<double>(p));
    return s;
}

Rational LogVector::to_rational() const {
    Rational r(1);
    for (const auto& [p, e] : exponents) r *= rational_pow(Rational(p), e);
    return r;
}

namespace {

// Factors n (> 0) by trial division; each prime factor must be <= bound.
bool factor_into(BigInt n, std::int64_t bound, std::int64_t sign,
                 std::map<std::int64_t, std::int64_t>& out) {
    auto strip = [&](std::int64_t p) {
        std::int64_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e != 0) {
            auto it = out.find(p);
            if (it == out.end()) {
                out.emplace(p, sign * e);
            } else if ((it->second += sign * e) == 0) {
                out.erase(it);
            }
        }
    };
    strip(2);
    for (std::int64_t p = 3; p <= bound && n > 1; p += 2) {
        if (BigInt(p) * p > n) break;
        strip(p);
    }
    if (n > 1) {
        // Remaining cofactor is prime (no factor <= min(bound, sqrt(n))).
        if (n > bound) return false;
        strip(n.convert_to<std::int64_t>());
    }
    return true;
}

}  // namespace

std::optional<LogVector> log_vector(const Rational& x, std::int64_t factor_bound) {
    if (x <= 0) throw std::domain_error("log_vector requires x > 0");
    LogVector v;
    if (!factor_into(rational_num(x), factor_bound, +1, v.exponents)) return std::nullopt;
    if (!factor_into(rational_den(x), factor_bound, -1, v.exponents)) return std::nullopt;
    return v;
}

SpanResult discrete_span(const std::vector<LogVector>& vs) {
    if (vs.empty()) throw std::invalid_argument("discrete_span: empty input");
    for (const auto& v : vs)
        if (v.is_zero()) throw std::invalid_argument("discrete_span: zero vector");

    // Primitive common direction from the first vector.
    std::int64_t content = 0;
    for (const auto& [p, e] : vs.front().exponents) content = std::gcd(content, std::llabs(e));
    LogVector dir;
    for (const auto& [p, e] : vs.front().exponents) dir.exponents.emplace(p, e / content);
    // Orient so the direction has positive value: exactly, prod p^e > 1.
    if (dir.to_rational() < 1) dir = dir * -1;

    // Each vector must be an integer multiple of dir.
    const auto& [p0, d0] = *dir.exponents.begin();
    std::vector<std::int64_t> coeffs;
    coeffs.reserve(vs.size());
    for (const auto& v : vs) {
        auto it = v.exponents.find(p0);
        if (it == v.exponents.end() || it->second % d0 != 0) return {};
        std::int64_t n = it->second / d0;
        if (n == 0 || !(dir * n == v)) return {};
        coeffs.push_back(n);
    }

    std::int64_t g = 0;
    for (std::int64_t n : coeffs) g = std::gcd(g, std::llabs(n));

    SpanResult res;
    res.discrete = true;
    res.generator = dir * g;
    res.multipliers.reserve(coeffs.size());
    for (std::int64_t n : coeffs) res.multipliers.emplace_back(n / g);
    return res;
}

}  // namespace gifs
