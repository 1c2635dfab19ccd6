#include "gifs/measure.hpp"

#include <cmath>
#include <deque>

namespace gifs {

Rational cylinder_measure(const GraphIFS& g, const Path& p) {
    (void)g;
    return p.p_path;
}

namespace {

// 1-D affine map x -> c*x + t tracked exactly along a path.
struct Affine1 {
    Rational c{1};
    Rational t{0};
    Affine1 then_edge(const Similarity& s) const {  // this ∘ s
        return {c * s.coeff1(), c * s.translate[0] + t};
    }
};

enum class Cls { Outside, Inside, Straddle };

Cls classify_1d(const Rational& lo, const Rational& hi, const Rational& blo, const Rational& bhi) {
    if (hi < blo || lo > bhi) return Cls::Outside;
    if (lo >= blo && hi <= bhi) return Cls::Inside;
    return Cls::Straddle;
}

struct Node {
    int vertex;
    Affine1 map;
    Rational mass;
    int depth;
};

}  // namespace

MeasureInterval ball_measure(const GraphIFS& g, const ComponentHulls& hulls, int u,
                             const std::vector<Rational>& x, const Rational& r,
                             const MeasureOptions& opts) {
    if (!(r > 0)) throw std::invalid_argument("ball_measure: r must be > 0");
    if (g.ambient_dim != 1 || !hulls.exact)
        throw std::logic_error("ball_measure: exact mode requires 1-D hulls");

    const Rational blo = x[0] - r;
    const Rational bhi = x[0] + r;
    const Rational tol = rational_from_double(opts.tol);

    Rational inside(0);
    std::deque<Node> frontier;
    frontier.push_back({u, Affine1{}, Rational(1), 0});

    int depth_reached = 0;
    auto frontier_mass = [&]() {
        Rational s(0);
        for (const auto& nd : frontier) s += nd.mass;
        return s;
    };

    while (!frontier.empty()) {
        // Classify the current frontier; expand straddlers one edge deeper.
        std::deque<Node> next;
        for (auto& nd : frontier) {
            const RationalBox& hull = hulls.exact_boxes[nd.vertex];
            Rational a = nd.map.c * hull.lo[0] + nd.map.t;
            Rational b = nd.map.c * hull.hi[0] + nd.map.t;
            if (a > b) std::swap(a, b);
            switch (classify_1d(a, b, blo, bhi)) {
                case Cls::Outside:
                    break;
                case Cls::Inside:
                    inside += nd.mass;
                    break;
                case Cls::Straddle:
                    if (nd.depth >= opts.max_depth) {
                        next.push_back(std::move(nd));
                    } else {
                        for (int e : g.out_edges[nd.vertex]) {
                            const Edge& ed = g.edges[e];
                            next.push_back({ed.to, nd.map.then_edge(ed.map), nd.mass * ed.prob,
                                            nd.depth + 1});
                            depth_reached = std::max(depth_reached, nd.depth + 1);
                        }
                    }
                    break;
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
        bool capped = true;
        for (const auto& nd : frontier)
            if (nd.depth < opts.max_depth) {
                capped = false;
                break;
            }
        if (capped) break;
        if (frontier_mass() <= tol) break;
    }

    Rational slack = frontier_mass();
    MeasureInterval out;
    out.exact_lo = inside;
    out.exact_hi = inside + slack;
    if (out.exact_hi > 1) out.exact_hi = 1;
    Interval lo_iv = iv_from_rational(out.exact_lo);
    Interval hi_iv = iv_from_rational(out.exact_hi);
    out.lo = std::max(0.0, lo_iv.lo);
    out.hi = std::min(1.0, hi_iv.hi);
    out.refinement_depth = depth_reached;
    out.converged = slack <= tol;
    return out;
}

MeasureInterval ball_measure(const GraphIFS& g, const ComponentHulls& hulls, int u,
                             const std::vector<double>& x, double r, const MeasureOptions& opts) {
    std::vector<Rational> xr;
    xr.reserve(x.size());
    for (double v : x) xr.push_back(rational_from_double(v));
    return ball_measure(g, hulls, u, xr, rational_from_double(r), opts);
}

}  // namespace gifs
