#pragma once

#include <array>
#include <vector>

#include "gifs/interval.hpp"
#include "gifs/rational.hpp"

namespace gifs {

/// Contracting similarity on R^1 or R^2 with exact parameters.
/// m=1: x -> sign*scale*x + translate[0].
/// m=2: p -> scale * Rot(angle_deg) * Reflect^b * p + translate, with the
/// reflection across the x-axis applied first.
struct Similarity {
    int dim = 1;
    Rational scale;  // in (0,1) for edges; compositions multiply exactly
    int sign = +1;   // m=1 orientation
    Rational angle_deg;  // m=2 rotation, exact degrees
    bool reflect = false;
    std::vector<Rational> translate;  // size dim

    /// Exact 1-D evaluation.
    Rational apply1(const Rational& x) const;
    /// Signed 1-D linear coefficient (sign*scale).
    Rational coeff1() const;
};

/// Composition S = a then b applied to the argument first: S(x) = a(b(x)).
/// Scales multiply exactly; in 2-D angles add/subtract exactly and
/// reflections xor.
Similarity compose(const Similarity& a, const Similarity& b);

/// Axis-aligned box with exact rational bounds (per-axis [lo, hi]).
struct RationalBox {
    std::vector<Rational> lo;
    std::vector<Rational> hi;

    int dim() const { return static_cast<int>(lo.size()); }
    Rational width(int axis) const { return hi[axis] - lo[axis]; }
};

/// Axis-aligned box with certified float interval bounds.
struct CertifiedBox {
    std::vector<Interval> axes;

    int dim() const { return static_cast<int>(axes.size()); }
    bool intersects(const CertifiedBox& o) const;
};

CertifiedBox certify(const RationalBox& b);

/// Image of a rational box under a similarity: exact for m=1 and for 2-D
/// right-angle rotations; otherwise a certified outward-rounded enclosure
/// is the only option (see certified_image).
RationalBox exact_image(const Similarity& s, const RationalBox& b);
bool has_exact_image(const Similarity& s);
CertifiedBox certified_image(const Similarity& s, const CertifiedBox& b);

}  // namespace gifs
