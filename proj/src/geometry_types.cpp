#include "gifs/geometry_types.hpp"

#include <cmath>
#include <stdexcept>

namespace gifs {

Rational Similarity::apply1(const Rational& x) const {
    return coeff1() * x + translate[0];
}

Rational Similarity::coeff1() const {
    return sign < 0 ? Rational(-scale) : scale;
}

Similarity compose(const Similarity& a, const Similarity& b) {
    if (a.dim != b.dim) throw std::invalid_argument("compose: dimension mismatch");
    Similarity s;
    s.dim = a.dim;
    s.scale = a.scale * b.scale;
    if (a.dim == 1) {
        s.sign = a.sign * b.sign;
        s.translate = {a.coeff1() * b.translate[0] + a.translate[0]};
        return s;
    }
    // 2-D: Rot(t1)F^{b1} Rot(t2)F^{b2} = Rot(t1 + (-1)^{b1} t2) F^{b1^b2}.
    s.reflect = a.reflect != b.reflect;
    s.angle_deg = a.reflect ? Rational(a.angle_deg - b.angle_deg)
                            : Rational(a.angle_deg + b.angle_deg);
    // Translation a(b(0)) needs the rotated image of b.translate; exact only
    // for right angles, so store it exactly when possible and defer to
    // certified_image otherwise.
    if (has_exact_image(a)) {
        const Rational& bx = b.translate[0];
        const Rational& by = b.translate[1];
        Rational rx = a.reflect ? bx : bx;
        Rational ry = a.reflect ? -by : by;
        long long quarter = (a.angle_deg / 90).convert_to<long long>();
        quarter = ((quarter % 4) + 4) % 4;
        Rational cx = rx, cy = ry;
        switch (quarter) {
            case 0: break;
            case 1: cx = -ry, cy = rx; break;
            case 2: cx = -rx, cy = -ry; break;
            case 3: cx = ry, cy = -rx; break;
        }
        s.translate = {a.scale * cx + a.translate[0], a.scale * cy + a.translate[1]};
    } else {
        // Non-right-angle composite translations are irrational in general;
        // keep the double-rounded value, geometry consumers re-certify.
        double c = std::cos(to_double(a.angle_deg) * M_PI / 180.0);
        double sn = std::sin(to_double(a.angle_deg) * M_PI / 180.0);
        double bx = to_double(b.translate[0]);
        double by = a.reflect ? -to_double(b.translate[1]) : to_double(b.translate[1]);
        double sc = to_double(a.scale);
        s.translate = {rational_from_double(sc * (c * bx - sn * by) + to_double(a.translate[0])),
                       rational_from_double(sc * (sn * bx + c * by) + to_double(a.translate[1]))};
    }
    return s;
}

bool CertifiedBox::intersects(const CertifiedBox& o) const {
    for (int i = 0; i < dim(); ++i)
        if (!axes[i].intersects(o.axes[i])) return false;
    return true;
}

CertifiedBox certify(const RationalBox& b) {
    CertifiedBox c;
    c.axes.reserve(b.lo.size());
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        Interval lo = iv_from_rational(b.lo[i]);
        Interval hi = iv_from_rational(b.hi[i]);
        c.axes.push_back({lo.lo, hi.hi});
    }
    return c;
}

bool has_exact_image(const Similarity& s) {
    if (s.dim == 1) return true;
    return rational_den(s.angle_deg / 90) == 1;
}

RationalBox exact_image(const Similarity& s, const RationalBox& b) {
    if (s.dim == 1) {
        Rational a = s.apply1(b.lo[0]);
        Rational c = s.apply1(b.hi[0]);
        if (a > c) std::swap(a, c);
        return {{a}, {c}};
    }
    if (!has_exact_image(s)) throw std::domain_error("exact_image: non-right-angle rotation");
    // Map the four corners exactly and take the bounding box.
    long long quarter = (s.angle_deg / 90).convert_to<long long>();
    quarter = ((quarter % 4) + 4) % 4;
    auto map_pt = [&](Rational x, Rational y) {
        if (s.reflect) y = -y;
        Rational cx = x, cy = y;
        switch (quarter) {
            case 0: break;
            case 1: cx = -y, cy = x; break;
            case 2: cx = -x, cy = -y; break;
            case 3: cx = y, cy = -x; break;
        }
        return std::pair<Rational, Rational>(s.scale * cx + s.translate[0],
                                             s.scale * cy + s.translate[1]);
    };
    auto [x0, y0] = map_pt(b.lo[0], b.lo[1]);
    RationalBox out{{x0, y0}, {x0, y0}};
    for (int cx = 0; cx < 2; ++cx)
        for (int cy = 0; cy < 2; ++cy) {
            auto [x, y] = map_pt(cx ? b.hi[0] : b.lo[0], cy ? b.hi[1] : b.lo[1]);
            out.lo[0] = std::min(out.lo[0], x);
            out.lo[1] = std::min(out.lo[1], y);
            out.hi[0] = std::max(out.hi[0], x);
            out.hi[1] = std::max(out.hi[1], y);
        }
    return out;
}

CertifiedBox certified_image(const Similarity& s, const CertifiedBox& b) {
    if (s.dim == 1) {
        Interval k = iv_from_rational(s.coeff1());
        Interval t = iv_from_rational(s.translate[0]);
        Interval img = iv_add(iv_mul(k, b.axes[0]), t);
        return CertifiedBox{{img}};
    }
    double th = to_double(s.angle_deg) * M_PI / 180.0;
    // One-ulp pad on sin/cos keeps the rotation an enclosure.
    auto pad = [](double v) { return Interval(detail::dn(detail::dn(v)), detail::up(detail::up(v))); };
    Interval c = pad(std::cos(th)), sn = pad(std::sin(th));
    Interval sc = iv_from_rational(s.scale);
    Interval x = b.axes[0];
    Interval y = s.reflect ? iv_neg(b.axes[1]) : b.axes[1];
    Interval rx = iv_sub(iv_mul(c, x), iv_mul(sn, y));
    Interval ry = iv_add(iv_mul(sn, x), iv_mul(c, y));
    Interval tx = iv_from_rational(s.translate[0]);
    Interval ty = iv_from_rational(s.translate[1]);
    return CertifiedBox{{iv_add(iv_mul(sc, rx), tx), iv_add(iv_mul(sc, ry), ty)}};
}

}  // namespace gifs
