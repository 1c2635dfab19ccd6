#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gifs/rational.hpp"

namespace gifs {

/// ln(x) of a positive rational x as an integer vector over prime logs:
/// ln(x) = sum_p exponents[p] * ln(p). Because the logs of distinct primes
/// are linearly independent over the rationals, arithmetic on these vectors
/// decides equality and commensurability of such logs exactly.
struct LogVector {
    std::map<std::int64_t, std::int64_t> exponents;

    bool is_zero() const { return exponents.empty(); }

    LogVector& operator+=(const LogVector& o);
    LogVector& operator-=(const LogVector& o);
    LogVector operator+(const LogVector& o) const;
    LogVector operator-(const LogVector& o) const;
    LogVector operator*(std::int64_t k) const;
    bool operator==(const LogVector& o) const { return exponents == o.exponents; }

    /// Floating-point value sum_p e_p ln p.
    double value() const;

    /// The rational x with ln(x) represented by this vector.
    Rational to_rational() const;
};

inline constexpr std::int64_t kDefaultFactorBound = 1'000'000;

/// Exact prime-exponent representation of ln(x) for rational x > 0.
/// Returns nullopt (Undecidable) when a prime factor exceeds the trial
/// division bound; callers fall back to numeric handling.
std::optional<LogVector> log_vector(const Rational& x,
                                    std::int64_t factor_bound = kDefaultFactorBound);

/// Result of testing whether a finite set of log vectors generates a
/// discrete additive subgroup of the reals.
struct SpanResult {
    bool discrete = false;
    LogVector generator;                // largest lambda with every value in lambda*Z
    std::vector<Rational> multipliers;  // value_i / lambda, integers when discrete
};

/// The group generated by the values is discrete iff all exponent vectors
/// are parallel; the span is then the gcd-scaled common direction.
/// Total on nonempty lists of nonzero vectors; invariant under permutation
/// and duplication.
SpanResult discrete_span(const std::vector<LogVector>& vs);

}  // namespace gifs
