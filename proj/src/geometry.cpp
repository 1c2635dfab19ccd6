#include "gifs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

namespace gifs {

namespace {

// Solves the 1-D hull fixed point exactly. Each hull endpoint satisfies a
// linear equation picked by a min/max policy over edges; policies are
// extracted from a float warm start and verified in rational arithmetic.
struct HullPolicy {
    // For each vertex: (edge index, child-endpoint-is-hi) attaining lo / hi.
    std::vector<std::pair<int, bool>> lo_choice;
    std::vector<std::pair<int, bool>> hi_choice;
};

// Gaussian elimination over rationals; a is n x (n+1) augmented.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::runtime_error("singular hull system");
        std::swap(a[col], a[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<Rational> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

// Endpoint of the image of [lo_v, hi_v] under edge e: coeff*child + t where
// child is lo or hi of the target vertex.
Rational image_endpoint(const GraphIFS& g, int e, bool child_hi,
                        const std::vector<Rational>& lo, const std::vector<Rational>& hi) {
    const Edge& ed = g.edges[e];
    const Rational& child = child_hi ? hi[ed.to] : lo[ed.to];
    return ed.map.coeff1() * child + ed.map.translate[0];
}

bool solve_hulls_1d(const GraphIFS& g, std::vector<Rational>& lo, std::vector<Rational>& hi) {
    const int n = g.vertex_count();

    // Float warm start from a coarse a-priori bound.
    double tmax = 0, rmax = 0;
    for (const auto& e : g.edges) {
        tmax = std::max(tmax, std::fabs(to_double(e.map.translate[0])));
        rmax = std::max(rmax, to_double(e.ratio));
    }
    double bound = tmax / (1.0 - rmax) + 1.0;
    std::vector<double> flo(n, -bound), fhi(n, bound);
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> nlo(n, std::numeric_limits<double>::infinity());
        std::vector<double> nhi(n, -std::numeric_limits<double>::infinity());
        for (const auto& e : g.edges) {
            double c = to_double(e.map.coeff1());
            double t = to_double(e.map.translate[0]);
            double a = c * flo[e.to] + t;
            double b = c * fhi[e.to] + t;
            if (a > b) std::swap(a, b);
            nlo[e.from] = std::min(nlo[e.from], a);
            nhi[e.from] = std::max(nhi[e.from], b);
        }
        flo = std::move(nlo);
        fhi = std::move(nhi);
    }

    lo.assign(n, Rational(0));
    hi.assign(n, Rational(0));
    for (int i = 0; i < n; ++i) {
        lo[i] = rational_from_double(flo[i]);
        hi[i] = rational_from_double(fhi[i]);
    }

    // Policy iteration: pick attaining edges, solve, verify against all edges.
    for (int round = 0; round < 64; ++round) {
        HullPolicy pol;
        pol.lo_choice.assign(n, {-1, false});
        pol.hi_choice.assign(n, {-1, false});
        for (int u = 0; u < n; ++u) {
            Rational best_lo, best_hi;
            for (int e : g.out_edges[u]) {
                bool neg = g.edges[e].map.coeff1() < 0;
                Rational a = image_endpoint(g, e, neg, lo, hi);       // image lower end
                Rational b = image_endpoint(g, e, !neg, lo, hi);      // image upper end
                if (pol.lo_choice[u].first < 0 || a < best_lo) {
                    best_lo = a;
                    pol.lo_choice[u] = {e, neg};
                }
                if (pol.hi_choice[u].first < 0 || b > best_hi) {
                    best_hi = b;
                    pol.hi_choice[u] = {e, !neg};
                }
            }
        }

        // Linear system: unknowns x[0..n) = lo, x[n..2n) = hi.
        const int m = 2 * n;
        std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1, Rational(0)));
        for (int u = 0; u < n; ++u) {
            for (int half = 0; half < 2; ++half) {
                auto [e, child_hi] = half == 0 ? pol.lo_choice[u] : pol.hi_choice[u];
                const Edge& ed = g.edges[e];
                int row = half == 0 ? u : n + u;
                int child = child_hi ? n + ed.to : ed.to;
                a[row][row] += 1;
                a[row][child] -= ed.map.coeff1();
                a[row][m] = ed.map.translate[0];
            }
        }
        std::vector<Rational> x = solve_linear(std::move(a));
        for (int u = 0; u < n; ++u) {
            lo[u] = x[u];
            hi[u] = x[n + u];
        }

        bool ok = true;
        for (int u = 0; u < n && ok; ++u) {
            if (lo[u] > hi[u]) {
                ok = false;
                break;
            }
            Rational min_img, max_img;
            bool first = true;
            for (int e : g.out_edges[u]) {
                bool neg = g.edges[e].map.coeff1() < 0;
                Rational a2 = image_endpoint(g, e, neg, lo, hi);
                Rational b2 = image_endpoint(g, e, !neg, lo, hi);
                if (first || a2 < min_img) min_img = a2;
                if (first || b2 > max_img) max_img = b2;
                first = false;
            }
            if (min_img != lo[u] || max_img != hi[u]) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

ComponentHulls component_hulls(const GraphIFS& g, const HullOptions& opts) {
    const int n = g.vertex_count();
    ComponentHulls h;
    if (g.ambient_dim == 1) {
        std::vector<Rational> lo, hi;
        if (solve_hulls_1d(g, lo, hi)) {
            h.exact = true;
            h.exact_boxes.resize(n);
            h.exact_diameter.resize(n);
            h.boxes.resize(n);
            h.diameter.resize(n);
            for (int u = 0; u < n; ++u) {
                h.exact_boxes[u] = {{lo[u]}, {hi[u]}};
                h.exact_diameter[u] = hi[u] - lo[u];
                h.boxes[u] = certify(h.exact_boxes[u]);
                Interval d = iv_from_rational(h.exact_diameter[u]);
                h.diameter[u] = d;
            }
            return h;
        }
    }

    // Certified interval iteration (2-D, or 1-D policy fallback).
    double tmax = 0, rmax = 0;
    for (const auto& e : g.edges) {
        for (const auto& t : e.map.translate)
            tmax = std::max(tmax, std::fabs(to_double(t)));
        rmax = std::max(rmax, to_double(e.ratio));
    }
    double bound = tmax / (1.0 - rmax) + 1.0;
    std::vector<CertifiedBox> boxes(n);
    for (int u = 0; u < n; ++u)
        boxes[u].axes.assign(g.ambient_dim, Interval(-bound, bound));

    double change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iterations && change > opts.tol; ++it) {
        std::vector<CertifiedBox> next(n);
        for (int u = 0; u < n; ++u) next[u].axes.assign(g.ambient_dim, Interval());
        std::vector<bool> seen(n, false);
        for (const auto& e : g.edges) {
            CertifiedBox img = certified_image(e.map, boxes[e.to]);
            if (!seen[e.from]) {
                next[e.from] = img;
                seen[e.from] = true;
            } else {
                for (int a = 0; a < g.ambient_dim; ++a)
                    next[e.from].axes[a] = iv_hull(next[e.from].axes[a], img.axes[a]);
            }
        }
        change = 0;
        for (int u = 0; u < n; ++u)
            for (int a = 0; a < g.ambient_dim; ++a) {
                change = std::max(change, std::fabs(next[u].axes[a].lo - boxes[u].axes[a].lo));
                change = std::max(change, std::fabs(next[u].axes[a].hi - boxes[u].axes[a].hi));
            }
        boxes = std::move(next);
    }
    if (!(change <= opts.tol))
        throw std::runtime_error("component_hulls: no convergence within iteration cap");

    h.exact = false;
    h.boxes = boxes;
    h.diameter.resize(n);
    for (int u = 0; u < n; ++u) {
        double hi2 = 0;
        for (int a = 0; a < g.ambient_dim; ++a) {
            double w = boxes[u].axes[a].width();
            hi2 += w * w;
        }
        // Lower bound on |F_u| from the widest axis shrunk by the box slack；
        // refined by attractor sampling when callers need it.
        double lo = 0;
        for (int a = 0; a < g.ambient_dim; ++a)
            lo = std::max(lo, std::max(0.0, boxes[u].axes[a].width() - 4 * opts.tol));
        if (g.ambient_dim == 1)
            h.diameter[u] = Interval(lo, detail::up(boxes[u].axes[0].width()));
        else
            h.diameter[u] = Interval(0.0, detail::up(std::sqrt(hi2)));
    }
    return h;
}

Similarity compose(const GraphIFS& g, const Path& p) {
    Similarity s = g.edges[p.edges.front()].map;
    for (std::size_t i = 1; i < p.edges.size(); ++i) s = compose(s, g.edges[p.edges[i]].map);
    return s;
}

std::vector<std::vector<Rational>> anchor_points(const GraphIFS& g, const ComponentHulls& hulls) {
    const int n = g.vertex_count();
    std::vector<std::vector<Rational>> anchors(n);
    for (int u = 0; u < n; ++u) {
        int loop = -1;
        for (int e : g.out_edges[u])
            if (g.edges[e].to == u) {
                loop = e;
                break;
            }
        if (loop >= 0 && g.ambient_dim == 1) {
            const Similarity& s = g.edges[loop].map;
            anchors[u] = {s.translate[0] / (Rational(1) - s.coeff1())};
        } else if (loop >= 0 && g.ambient_dim == 2 && has_exact_image(g.edges[loop].map)) {
            // p = sRp + t solved exactly for right-angle rotations.
            const Similarity& s = g.edges[loop].map;
            long long quarter = (s.angle_deg / 90).convert_to<long long>();
            quarter = ((quarter % 4) + 4) % 4;
            Rational rc[2][2] = {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}};
            switch (quarter) {
                case 0: rc[0][0] = 1; rc[1][1] = 1; break;
                case 1: rc[0][1] = -1; rc[1][0] = 1; break;
                case 2: rc[0][0] = -1; rc[1][1] = -1; break;
                case 3: rc[0][1] = 1; rc[1][0] = -1; break;
            }
            if (s.reflect) {
                rc[0][1] = -rc[0][1];
                rc[1][1] = -rc[1][1];
            }
            std::vector<std::vector<Rational>> a = {
                {Rational(1) - s.scale * rc[0][0], -s.scale * rc[0][1], s.translate[0]},
                {-s.scale * rc[1][0], Rational(1) - s.scale * rc[1][1], s.translate[1]}};
            auto x = solve_linear(std::move(a));
            anchors[u] = {x[0], x[1]};
        } else if (hulls.exact) {
            anchors[u] = {hulls.exact_boxes[u].lo[0]};
        } else {
            anchors[u].clear();
            for (int a = 0; a < g.ambient_dim; ++a)
                anchors[u].push_back(rational_from_double(hulls.boxes[u].axes[a].lo));
        }
    }
    return anchors;
}

RationalBox cylinder_box_exact(const GraphIFS& g, const ComponentHulls& hulls, const Path& p) {
    if (!hulls.exact) throw std::logic_error("cylinder_box_exact: hulls not exact");
    RationalBox b = hulls.exact_boxes[p.to];
    for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it)
        b = exact_image(g.edges[*it].map, b);
    return b;
}

CertifiedBox cylinder_box(const GraphIFS& g, const ComponentHulls& hulls, const Path& p) {
    if (hulls.exact) return certify(cylinder_box_exact(g, hulls, p));
    CertifiedBox b = hulls.boxes[p.to];
    for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it)
        b = certified_image(g.edges[*it].map, b);
    return b;
}

PointCloud attractor_points(const GraphIFS& g, const ComponentHulls& hulls, int u, int depth,
                            const CloudOptions& opts) {
    if (depth < 1) throw std::invalid_argument("attractor_points: depth must be >= 1");
    PointCloud cloud;
    cloud.depth = depth;
    auto anchors = anchor_points(g, hulls);

    double rmax = 0, dmax = 0;
    for (const auto& e : g.edges) rmax = std::max(rmax, to_double(e.ratio));
    for (const auto& d : hulls.diameter) dmax = std::max(dmax, d.hi);
    cloud.resolution = std::pow(rmax, depth) * dmax;

    if (opts.mode == CloudMode::Deterministic) {
        auto paths = enumerate_paths(g, u, depth, std::nullopt, opts.path_cap);
        cloud.points.reserve(paths.size());
        cloud.path_ids.reserve(paths.size());
        for (const auto& p : paths) {
            Similarity s = compose(g, p);
            std::vector<double> pt;
            if (g.ambient_dim == 1) {
                pt = {to_double(s.apply1(anchors[p.to][0]))};
            } else {
                CertifiedBox base{{iv_from_rational(anchors[p.to][0]), iv_from_rational(anchors[p.to][1])}};
                CertifiedBox img = certified_image(s, base);
                pt = {img.axes[0].mid(), img.axes[1].mid()};
            }
            cloud.points.push_back(std::move(pt));
            cloud.path_ids.push_back(path_id(g, p));
        }
        return cloud;
    }

    // Chaos mode: each point is an independent probability-weighted walk,
    // seeded by (seed, index) so results are thread-count independent.
    cloud.points.reserve(opts.chaos_count);
    for (int i = 0; i < opts.chaos_count; ++i) {
        std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<int> walk;
        int v = u;
        for (int step = 0; step < depth; ++step) {
            double x = uni(rng), acc = 0;
            int chosen = g.out_edges[v].back();
            for (int e : g.out_edges[v]) {
                acc += to_double(g.edges[e].prob);
                if (x < acc) {
                    chosen = e;
                    break;
                }
            }
            walk.push_back(chosen);
            v = g.edges[chosen].to;
        }
        Path p = make_path(g, walk);
        Similarity s = compose(g, p);
        if (g.ambient_dim == 1) {
            cloud.points.push_back({to_double(s.apply1(anchors[p.to][0]))});
        } else {
            CertifiedBox base{{iv_from_rational(anchors[p.to][0]), iv_from_rational(anchors[p.to][1])}};
            CertifiedBox img = certified_image(s, base);
            cloud.points.push_back({img.axes[0].mid(), img.axes[1].mid()});
        }
    }
    return cloud;
}

namespace {

Rational box_gap_1d(const RationalBox& a, const RationalBox& b) {
    Rational g1 = b.lo[0] - a.hi[0];
    Rational g2 = a.lo[0] - b.hi[0];
    Rational g = std::max(g1, g2);
    return g > 0 ? g : Rational(0);
}

Rational point_dist_1d(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational d = a[0] - b[0];
    return d < 0 ? Rational(-d) : d;
}

}  // namespace

SetDistanceResult set_distance(const std::vector<CoverElement>& a,
                               const std::vector<CoverElement>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("set_distance: empty cover");
    SetDistanceResult res;
    bool first_gap = true, first_wit = true;
    std::vector<Rational> best_a, best_b;
    for (const auto& ea : a)
        for (const auto& eb : b) {
            Rational gap = box_gap_1d(ea.box, eb.box);
            if (first_gap || gap < res.lo) {
                res.lo = gap;
                first_gap = false;
            }
            for (const auto& wa : ea.witnesses)
                for (const auto& wb : eb.witnesses) {
                    Rational d = point_dist_1d(wa, wb);
                    if (first_wit || d < res.hi) {
                        res.hi = d;
                        best_a = wa;
                        first_wit = false;
                    }
                }
        }
    res.exact = res.lo == res.hi;
    if (res.exact && res.hi == 0) res.touch_point = best_a;
    return res;
}

CoverElement cylinder_cover_element(const GraphIFS& g, const ComponentHulls& hulls,
                                    const Path& p) {
    CoverElement el;
    el.box = cylinder_box_exact(g, hulls, p);
    el.witnesses = {{el.box.lo[0]}, {el.box.hi[0]}};
    return el;
}

SetDistanceResult cylinder_set_distance(const GraphIFS& g, const ComponentHulls& hulls,
                                        const Path& a, const Path& b, int depth_cap) {
    if (!hulls.exact)
        throw std::logic_error("cylinder_set_distance requires exact hulls (1-D)");

    struct Node {
        Path pa, pb;
        Rational gap;
        int depth;
    };
    auto gap_of = [&](const Path& pa, const Path& pb) {
        return box_gap_1d(cylinder_box_exact(g, hulls, pa), cylinder_box_exact(g, hulls, pb));
    };
    auto witness_hi = [&](const Path& pa, const Path& pb, std::vector<Rational>* touch) {
        auto ba = cylinder_box_exact(g, hulls, pa);
        auto bb = cylinder_box_exact(g, hulls, pb);
        Rational best;
        bool first = true;
        for (const Rational& wa : {ba.lo[0], ba.hi[0]})
            for (const Rational& wb : {bb.lo[0], bb.hi[0]}) {
                Rational d = wa > wb ? wa - wb : wb - wa;
                if (first || d < best) {
                    best = d;
                    if (touch) *touch = {wa};
                    first = false;
                }
            }
        return best;
    };

    std::vector<Rational> touch;
    Rational best_hi = witness_hi(a, b, &touch);
    auto cmp = [](const Node& x, const Node& y) { return x.gap > y.gap; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);
    queue.push({a, b, gap_of(a, b), 0});

    SetDistanceResult res;
    while (!queue.empty()) {
        Node top = queue.top();
        if (top.gap >= best_hi) {
            // Every remaining pair is at least best_hi away; the witness
            // distance is attained, so it is the exact set distance.
            res.lo = best_hi;
            res.hi = best_hi;
            res.exact = true;
            if (best_hi == 0) res.touch_point = touch;
            return res;
        }
        if (top.depth >= depth_cap) {
            res.lo = top.gap;
            res.hi = best_hi;
            res.exact = false;
            return res;
        }
        queue.pop();
        // Split the deeper-refinable side (shorter r_path first keeps boxes balanced).
        bool split_a = top.pa.r_path >= top.pb.r_path;
        const Path& split = split_a ? top.pa : top.pb;
        for (int e : g.out_edges[split.to]) {
            std::vector<int> ext = split.edges;
            ext.push_back(e);
            Path child = make_path(g, std::move(ext));
            Node nd;
            nd.pa = split_a ? child : top.pa;
            nd.pb = split_a ? top.pb : child;
            nd.depth = top.depth + 1;
            nd.gap = gap_of(nd.pa, nd.pb);
            std::vector<Rational> t2;
            Rational h = witness_hi(nd.pa, nd.pb, &t2);
            if (h < best_hi) {
                best_hi = h;
                touch = t2;
            }
            if (nd.gap < best_hi) queue.push(std::move(nd));
        }
        if (queue.empty()) {
            res.lo = best_hi;
            res.hi = best_hi;
            res.exact = true;
            if (best_hi == 0) res.touch_point = touch;
            return res;
        }
    }
    res.lo = best_hi;
    res.hi = best_hi;
    res.exact = true;
    if (best_hi == 0) res.touch_point = touch;
    return res;
}

CodedPoint code_to_point(const GraphIFS& g, const ComponentHulls& hulls, const Path& prefix) {
    auto anchors = anchor_points(g, hulls);
    Similarity s = compose(g, prefix);
    CodedPoint cp;
    if (g.ambient_dim == 1) {
        cp.point = {s.apply1(anchors[prefix.to][0])};
    } else {
        cp.point = anchors[prefix.to];  // mapped approximately below
        CertifiedBox base{{iv_from_rational(cp.point[0]), iv_from_rational(cp.point[1])}};
        CertifiedBox img = certified_image(s, base);
        cp.point = {rational_from_double(img.axes[0].mid()), rational_from_double(img.axes[1].mid())};
    }
    if (hulls.exact)
        cp.error_radius = prefix.r_path * hulls.exact_diameter[prefix.to];
    else
        cp.error_radius = prefix.r_path * rational_from_double(hulls.diameter[prefix.to].hi);
    return cp;
}

}  // namespace gifs
