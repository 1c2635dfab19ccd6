#include "gifs/separation.hpp"

#include <algorithm>
#include <numeric>

namespace gifs {

namespace {

std::string edge_name(const GraphIFS& g, int e) { return g.edges[e].id; }

}  // namespace

SeparationReport check_ssc(const GraphIFS& g, const ComponentHulls& hulls, int depth_cap) {
    SeparationReport rep;
    rep.condition = SeparationCondition::SSC;
    if (!hulls.exact) {
        rep.verdict = Verdict::Undecided;
        rep.notes.push_back("exact hulls unavailable; pairwise distances not certified");
        return rep;
    }

    std::optional<Rational> min_dist;
    for (int u = 0; u < g.vertex_count(); ++u) {
        const auto& out = g.out_edges[u];
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                Path pa = make_path(g, {out[i]});
                Path pb = make_path(g, {out[j]});
                auto d = cylinder_set_distance(g, hulls, pa, pb, depth_cap);
                if (d.exact && d.hi == 0) {
                    rep.verdict = Verdict::Fails;
                    rep.witness_pair = {edge_name(g, out[i]), edge_name(g, out[j])};
                    rep.touch_point = d.touch_point;
                    return rep;
                }
                if (!(d.lo > 0)) {
                    rep.verdict = Verdict::Undecided;
                    rep.witness_pair = {edge_name(g, out[i]), edge_name(g, out[j])};
                    rep.notes.push_back("distance bracket straddles 0 at the refinement cap");
                    return rep;
                }
                if (!min_dist || d.lo < *min_dist) min_dist = d.lo;
            }
    }
    rep.verdict = Verdict::Holds;
    rep.epsilon = *min_dist / 2;
    return rep;
}

SeparationReport check_cssc(const GraphIFS& g, const ComponentHulls& hulls) {
    SeparationReport rep;
    rep.condition = SeparationCondition::CSSC;
    if (!hulls.exact) {
        rep.verdict = Verdict::Undecided;
        rep.notes.push_back("convex hull intervals not exact");
        return rep;
    }
    for (int u = 0; u < g.vertex_count(); ++u) {
        const auto& out = g.out_edges[u];
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                RationalBox a = cylinder_box_exact(g, hulls, make_path(g, {out[i]}));
                RationalBox b = cylinder_box_exact(g, hulls, make_path(g, {out[j]}));
                if (a.hi[0] >= b.lo[0] && b.hi[0] >= a.lo[0]) {
                    rep.verdict = Verdict::Fails;
                    rep.witness_pair = {edge_name(g, out[i]), edge_name(g, out[j])};
                    return rep;
                }
            }
    }
    rep.verdict = Verdict::Holds;
    return rep;
}

SeparationReport check_osc(const GraphIFS& g, const std::vector<RationalBox>& open_sets) {
    SeparationReport rep;
    rep.condition = SeparationCondition::OSC;
    rep.notes.push_back("for contracting similarities the strong OSC is equivalent to the OSC");
    if (static_cast<int>(open_sets.size()) != g.vertex_count())
        throw std::invalid_argument("check_osc: one open box per vertex required");

    for (const auto& e : g.edges) {
        if (!has_exact_image(e.map)) {
            rep.verdict = Verdict::Undecided;
            rep.notes.push_back("edge '" + e.id + "': rotated image not exactly representable");
            return rep;
        }
        RationalBox img = exact_image(e.map, open_sets[e.to]);
        for (int a = 0; a < g.ambient_dim; ++a) {
            if (img.lo[a] < open_sets[e.from].lo[a] || img.hi[a] > open_sets[e.from].hi[a]) {
                rep.verdict = Verdict::Fails;
                rep.witness_pair = {e.id, e.id};
                rep.notes.push_back("image of open set under '" + e.id + "' escapes the parent set");
                return rep;
            }
        }
    }
    for (int u = 0; u < g.vertex_count(); ++u) {
        const auto& out = g.out_edges[u];
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j) {
                RationalBox a = exact_image(g.edges[out[i]].map, open_sets[g.edges[out[i]].to]);
                RationalBox b = exact_image(g.edges[out[j]].map, open_sets[g.edges[out[j]].to]);
                // Open boxes are disjoint when they only share boundary.
                bool overlap = true;
                for (int ax = 0; ax < g.ambient_dim; ++ax)
                    if (a.hi[ax] <= b.lo[ax] || b.hi[ax] <= a.lo[ax]) overlap = false;
                if (overlap) {
                    rep.verdict = Verdict::Fails;
                    rep.witness_pair = {edge_name(g, out[i]), edge_name(g, out[j])};
                    rep.notes.push_back("sibling open-set images overlap");
                    return rep;
                }
            }
    }
    rep.verdict = Verdict::Holds;
    return rep;
}

std::vector<RationalBox> default_open_sets(const GraphIFS& g, const ComponentHulls& hulls) {
    std::vector<RationalBox> sets(g.vertex_count());
    for (int u = 0; u < g.vertex_count(); ++u) {
        if (u < static_cast<int>(g.open_sets.size()) && g.open_sets[u]) {
            sets[u] = *g.open_sets[u];
        } else if (hulls.exact) {
            sets[u] = hulls.exact_boxes[u];
        } else {
            sets[u].lo.clear();
            sets[u].hi.clear();
            for (int a = 0; a < g.ambient_dim; ++a) {
                sets[u].lo.push_back(rational_from_double(hulls.boxes[u].axes[a].lo));
                sets[u].hi.push_back(rational_from_double(hulls.boxes[u].axes[a].hi));
            }
        }
    }
    return sets;
}

namespace {

// Clearance of the cylinder to the open-set boundary: positive iff the
// cylinder sits strictly inside.
std::optional<Rational> interior_margin(const RationalBox& cyl, const RationalBox& open) {
    Rational margin;
    bool first = true;
    for (std::size_t a = 0; a < cyl.lo.size(); ++a) {
        Rational m1 = cyl.lo[a] - open.lo[a];
        Rational m2 = open.hi[a] - cyl.hi[a];
        Rational m = std::min(m1, m2);
        if (first || m < margin) margin = m;
        first = false;
    }
    if (!(margin > 0)) return std::nullopt;
    return margin;
}

std::optional<Path> first_interior_path(const GraphIFS& g, const ComponentHulls& hulls,
                                        const RationalBox& open, int u, int max_len) {
    for (int len = 1; len <= max_len; ++len) {
        auto paths = enumerate_paths(g, u, len);
        for (const auto& p : paths) {
            RationalBox cyl = cylinder_box_exact(g, hulls, p);
            if (interior_margin(cyl, open)) return p;
        }
    }
    return std::nullopt;
}

Path pad_to_length(const GraphIFS& g, const Path& p, int l) {
    std::vector<int> edges = p.edges;
    int v = p.to;
    while (static_cast<int>(edges.size()) < l) {
        int e = g.out_edges[v].front();  // lexicographically first extension
        edges.push_back(e);
        v = g.edges[e].to;
    }
    return make_path(g, std::move(edges));
}

}  // namespace

InteriorPaths construct_ell_paths(const GraphIFS& g, const ComponentHulls& hulls,
                                  const std::vector<RationalBox>& open_sets, int min_l,
                                  int max_l) {
    if (!hulls.exact)
        throw std::logic_error("construct_ell_paths: exact hulls required");

    std::vector<Path> base(g.vertex_count());
    int l = min_l;
    for (int u = 0; u < g.vertex_count(); ++u) {
        auto p = first_interior_path(g, hulls, open_sets[u], u, max_l);
        if (!p)
            throw std::runtime_error("construct_ell_paths: no strictly interior cylinder at vertex " +
                                     g.vertices[u] + " within the search cap");
        base[u] = *p;
        l = std::max(l, static_cast<int>(p->length()));
    }

    const int h = primitivity_index(transfer_matrix(g, 0.0, 0.0));
    for (; l <= max_l; ++l) {
        if (std::gcd(l, h) != 1) continue;
        InteriorPaths out;
        out.l = l;
        out.ell_paths.reserve(g.vertex_count());
        bool ok = true;
        for (int u = 0; u < g.vertex_count(); ++u) {
            Path padded = pad_to_length(g, base[u], l);
            // Containment survives padding (cylinders nest), re-verified anyway.
            if (!interior_margin(cylinder_box_exact(g, hulls, padded), open_sets[u])) {
                ok = false;
                break;
            }
            out.ell_paths.push_back(std::move(padded));
        }
        if (!ok) continue;
        if (!is_irreducible(pruned_transfer_matrix(g, 0.0, 0.0, l, out.ell_paths))) continue;
        return out;
    }
    throw std::runtime_error("construct_ell_paths: no admissible common length below the cap");
}

SystemConstants compute_constants(const GraphIFS& g, const ComponentHulls& hulls,
                                  const std::vector<RationalBox>& open_sets,
                                  const InteriorPaths& interior) {
    if (!hulls.exact)
        throw std::logic_error("compute_constants: exact hulls required");
    SystemConstants sc;
    sc.l = interior.l;
    sc.ell_paths = interior.ell_paths;

    Rational r_min, r_max;
    bool first = true;
    for (const auto& e : g.edges) {
        if (first || e.ratio < r_min) r_min = e.ratio;
        if (first || e.ratio > r_max) r_max = e.ratio;
        first = false;
    }
    Rational d_min = hulls.exact_diameter[0], d_max = hulls.exact_diameter[0];
    for (const auto& d : hulls.exact_diameter) {
        d_min = std::min(d_min, d);
        d_max = std::max(d_max, d);
    }

    Rational c_min;
    first = true;
    for (int u = 0; u < g.vertex_count(); ++u) {
        RationalBox cyl = cylinder_box_exact(g, hulls, interior.ell_paths[u]);
        auto margin = interior_margin(cyl, open_sets[u]);
        if (!margin)
            throw std::runtime_error("compute_constants: designated cylinder has no clearance");
        sc.c_v_exact.push_back(*margin);
        sc.c_v.push_back(to_double(*margin));
        if (first || *margin < c_min) c_min = *margin;
        first = false;
    }

    // Minimal N with 2 d_max / c_min <= r_max^-(N-1).
    Rational lhs = 2 * d_max / c_min;
    int N = 1;
    while (rational_pow(Rational(1) / r_max, N - 1) < lhs) {
        ++N;
        if (N > 4096) throw std::runtime_error("compute_constants: clearance depth out of range");
    }
    sc.clearance_depth = N;

    sc.delta_exact = rational_pow(r_min, N + sc.l + 1) * d_min;
    sc.alpha_exact = Rational(1) / (rational_pow(r_max, N) * d_max);
    sc.beta_scale_exact = Rational(1) / (rational_pow(r_min, N + 1) * d_min);
    if (!(sc.delta_exact > 0 && sc.delta_exact < 1))
        throw std::runtime_error("compute_constants: small-scale threshold outside (0,1)");

    sc.r_min = to_double(r_min);
    sc.r_max = to_double(r_max);
    sc.d_min = to_double(d_min);
    sc.d_max = to_double(d_max);
    sc.c_min = to_double(c_min);
    sc.delta = to_double(sc.delta_exact);
    sc.alpha = to_double(sc.alpha_exact);
    sc.beta_scale = to_double(sc.beta_scale_exact);
    return sc;
}

}  // namespace gifs
