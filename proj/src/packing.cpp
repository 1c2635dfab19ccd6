#include "gifs/packing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

namespace gifs {

namespace {

struct Candidate {
    Rational x;
    std::string id;
};

void require_exact_1d(const GraphIFS& g, const ComponentHulls& hulls, const char* who) {
    if (g.ambient_dim != 1 || !hulls.exact)
        throw std::logic_error(std::string(who) + ": exact packing estimators are 1-D");
}

// Candidate points of F_u: endpoints of stopping-set cylinders at scale rho
// (hull endpoints are points of the component, so both cylinder endpoints
// lie in F_u). Falls back to the component endpoints when rho exceeds the
// component diameter. Deduplicates identical points keeping the first id
// in lexicographic order.
std::vector<Candidate> candidate_points(const GraphIFS& g, const ComponentHulls& hulls, int u,
                                        const Rational& rho, std::uint64_t cap,
                                        int first_edge = -1) {
    std::map<Rational, std::string> dedup;
    auto add = [&](const Rational& x, std::string id) {
        auto it = dedup.find(x);
        if (it == dedup.end())
            dedup.emplace(x, std::move(id));
        else if (id < it->second)
            it->second = std::move(id);
    };

    const Rational diam = hulls.exact_diameter[u];
    if (rho > diam) {
        const auto& hull = hulls.exact_boxes[u];
        if (first_edge < 0) {
            add(hull.lo[0], "@lo");
            add(hull.hi[0], "@hi");
        } else {
            Path p = make_path(g, {first_edge});
            RationalBox box = cylinder_box_exact(g, hulls, p);
            add(box.lo[0], path_id(g, p) + "@lo");
            add(box.hi[0], path_id(g, p) + "@hi");
        }
    } else {
        auto paths = stopping_paths(g, u, rho, hulls.exact_diameter, cap);
        for (const auto& p : paths) {
            if (first_edge >= 0 && p.edges.front() != first_edge) continue;
            RationalBox box = cylinder_box_exact(g, hulls, p);
            std::string id = path_id(g, p);
            add(box.lo[0], id + "@lo");
            add(box.hi[0], id + "@hi");
        }
        if (first_edge >= 0 && dedup.empty()) {
            Path p = make_path(g, {first_edge});
            RationalBox box = cylinder_box_exact(g, hulls, p);
            add(box.lo[0], path_id(g, p) + "@lo");
            add(box.hi[0], path_id(g, p) + "@hi");
        }
    }

    std::vector<Candidate> out;
    out.reserve(dedup.size());
    for (auto& [x, id] : dedup) out.push_back({x, id});
    return out;  // sorted ascending by position
}

// Left-to-right sweep: maximal strictly-(>2r)-separated subset of a sorted
// candidate list; optimal for candidate sets on the line.
std::vector<std::size_t> sweep_select(const std::vector<Candidate>& cands, const Rational& two_r) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (chosen.empty() || cands[i].x - cands[chosen.back()].x > two_r) chosen.push_back(i);
    }
    return chosen;
}

PackingEstimate finish_counting(const GraphIFS& g, const ComponentHulls& hulls, int u,
                                const Rational& r, const PackingOptions& opts, int first_edge,
                                const Rational* neighbor_filter_lo,
                                const Rational* neighbor_filter_hi) {
    const Rational two_r = 2 * r;
    Rational rho = r * opts.candidate_scale;
    std::size_t best = 0;
    std::vector<Candidate> best_cands;
    std::vector<std::size_t> best_sel;
    int stable = 0;
    for (int level = 0; level <= opts.refine_levels; ++level) {
        auto cands = candidate_points(g, hulls, u, rho, opts.path_cap, first_edge);
        if (neighbor_filter_lo) {
            std::vector<Candidate> filtered;
            for (auto& c : cands)
                if (c.x >= *neighbor_filter_lo && c.x <= *neighbor_filter_hi)
                    filtered.push_back(std::move(c));
            cands = std::move(filtered);
        }
        auto sel = sweep_select(cands, two_r);
        if (sel.size() > best || level == 0) {
            best = sel.size();
            best_cands = cands;
            best_sel = sel;
            stable = 0;
        } else if (++stable >= 2) {
            break;
        }
        rho /= 2;
    }

    PackingEstimate est;
    est.r = to_double(r);
    est.q = 0;
    est.exact = true;
    est.value = static_cast<double>(best);
    est.value_interval = Interval(est.value);
    for (std::size_t i : best_sel) {
        est.centers.push_back({best_cands[i].x});
        est.center_ids.push_back(best_cands[i].id);
    }
    return est;
}

struct RankedCandidate {
    Rational x;
    std::string id;
    MeasureInterval mass;
    double weight;  // mid(mass)^q
};

double powq(double base, double q) { return q == 0 ? 1.0 : std::pow(base, q); }

PackingEstimate greedy_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                              const Rational& r, const PackingOptions& opts,
                              std::vector<Candidate> cands) {
    const Rational two_r = 2 * r;

    std::vector<RankedCandidate> ranked;
    ranked.reserve(cands.size());
    bool all_converged = true;
    for (auto& c : cands) {
        RankedCandidate rc;
        rc.mass = ball_measure(g, hulls, u, std::vector<Rational>{c.x}, r, opts.measure);
        all_converged = all_converged && rc.mass.converged;
        rc.weight = powq(0.5 * (rc.mass.lo + rc.mass.hi), q);
        rc.x = std::move(c.x);
        rc.id = std::move(c.id);
        ranked.push_back(std::move(rc));
    }

    std::vector<std::size_t> order(ranked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranked[a].weight != ranked[b].weight) return ranked[a].weight > ranked[b].weight;
        return ranked[a].id < ranked[b].id;
    });

    // Selected set kept sorted by position; separation only needs the
    // nearest neighbors on each side.
    std::map<Rational, std::size_t> selected;
    auto fits = [&](const Rational& x, std::size_t ignore = SIZE_MAX) {
        auto it = selected.lower_bound(x);
        if (it != selected.end() && (ignore == SIZE_MAX || it->second != ignore) &&
            it->first - x <= two_r)
            return false;
        if (it != selected.end() && it->second == ignore) {
            auto nx = std::next(it);
            if (nx != selected.end() && nx->first - x <= two_r) return false;
        }
        if (it != selected.begin()) {
            auto pv = std::prev(it);
            if ((ignore == SIZE_MAX || pv->second != ignore) && x - pv->first <= two_r)
                return false;
            if (pv->second == ignore && pv != selected.begin()) {
                auto pp = std::prev(pv);
                if (x - pp->first <= two_r) return false;
            }
        }
        return true;
    };

    for (std::size_t i : order)
        if (fits(ranked[i].x)) selected.emplace(ranked[i].x, i);

    // Pairwise exchange: replace one selected center by a heavier unused
    // candidate whose only conflict is that center, then re-saturate.
    for (int pass = 0; pass < opts.exchange_passes; ++pass) {
        bool improved = false;
        for (std::size_t i : order) {
            if (selected.count(ranked[i].x)) continue;
            // Find the unique conflicting selected center, if any.
            std::size_t conflict = SIZE_MAX;
            int conflicts = 0;
            auto it = selected.lower_bound(ranked[i].x);
            if (it != selected.end() && it->first - ranked[i].x <= two_r) {
                conflict = it->second;
                ++conflicts;
            }
            if (it != selected.begin()) {
                auto pv = std::prev(it);
                if (ranked[i].x - pv->first <= two_r && pv->second != conflict) {
                    conflict = pv->second;
                    ++conflicts;
                }
            }
            if (conflicts != 1) continue;
            if (ranked[i].weight <= ranked[conflict].weight) continue;
            if (!fits(ranked[i].x, conflict)) continue;
            selected.erase(ranked[conflict].x);
            selected.emplace(ranked[i].x, i);
            improved = true;
        }
        if (improved) {
            for (std::size_t i : order)
                if (!selected.count(ranked[i].x) && fits(ranked[i].x))
                    selected.emplace(ranked[i].x, i);
        } else {
            break;
        }
    }

    PackingEstimate est;
    est.r = to_double(r);
    est.q = q;
    est.exact = false;
    est.converged = all_converged;
    double value = 0, vlo = 0, vhi = 0;
    for (const auto& [x, i] : selected) {
        est.centers.push_back({x});
        est.center_ids.push_back(ranked[i].id);
        value += ranked[i].weight;
        double mlo = ranked[i].mass.lo, mhi = ranked[i].mass.hi;
        if (q >= 0) {
            vlo += powq(mlo, q);
            vhi += powq(mhi, q);
        } else {
            vlo += powq(mhi, q);
            vhi += mlo > 0 ? powq(mlo, q) : std::numeric_limits<double>::infinity();
        }
    }
    est.value = value;
    est.value_interval = Interval(vlo, vhi);
    if (std::isinf(vhi)) est.converged = false;
    return est;
}

// Certified bracket for dist(x, S_path(F)) by branch and bound over
// sub-cylinders; exact on termination.
struct DistBracket {
    Rational lo;
    Rational hi;
    bool exact;
};

DistBracket point_set_distance(const GraphIFS& g, const ComponentHulls& hulls, const Rational& x,
                               const Path& root, int depth_cap = 64) {
    auto box_gap = [&](const RationalBox& b) -> Rational {
        if (x < b.lo[0]) return Rational(b.lo[0] - x);
        if (x > b.hi[0]) return Rational(x - b.hi[0]);
        return Rational(0);
    };
    auto endpoint_hi = [&](const RationalBox& b) {
        Rational d1 = x > b.lo[0] ? x - b.lo[0] : b.lo[0] - x;
        Rational d2 = x > b.hi[0] ? x - b.hi[0] : b.hi[0] - x;
        return std::min(d1, d2);
    };

    struct Node {
        Path p;
        Rational gap;
        int depth;
    };
    auto cmp = [](const Node& a, const Node& b) { return a.gap > b.gap; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);

    RationalBox rb = cylinder_box_exact(g, hulls, root);
    Rational best = endpoint_hi(rb);
    queue.push({root, box_gap(rb), 0});
    while (!queue.empty()) {
        Node top = queue.top();
        if (top.gap >= best) return {best, best, true};
        if (top.depth >= depth_cap) return {top.gap, best, false};
        queue.pop();
        for (int e : g.out_edges[top.p.to]) {
            std::vector<int> ext = top.p.edges;
            ext.push_back(e);
            Path child = make_path(g, std::move(ext));
            RationalBox cb = cylinder_box_exact(g, hulls, child);
            best = std::min(best, endpoint_hi(cb));
            Rational gap = box_gap(cb);
            if (gap < best) queue.push({std::move(child), gap, top.depth + 1});
        }
    }
    return {best, best, true};
}

}  // namespace

PackingEstimate packing_number(const GraphIFS& g, const ComponentHulls& hulls, int u,
                               const Rational& r, const PackingOptions& opts) {
    if (!(r > 0)) throw std::invalid_argument("packing_number: r must be > 0");
    require_exact_1d(g, hulls, "packing_number");
    return finish_counting(g, hulls, u, r, opts, -1, nullptr, nullptr);
}

PackingEstimate packing_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                               const Rational& r, const PackingOptions& opts) {
    if (!(r > 0)) throw std::invalid_argument("packing_moment: r must be > 0");
    require_exact_1d(g, hulls, "packing_moment");
    if (q == 0) return packing_number(g, hulls, u, r, opts);
    auto cands = candidate_points(g, hulls, u, r * opts.candidate_scale, opts.path_cap);
    return greedy_moment(g, hulls, u, q, r, opts, std::move(cands));
}

PackingEstimate overlap_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, int edge_e,
                               int edge_f, double q, const Rational& r,
                               const PackingOptions& opts) {
    if (!(r > 0)) throw std::invalid_argument("overlap_moment: r must be > 0");
    require_exact_1d(g, hulls, "overlap_moment");
    if (g.edges[edge_e].from != u || g.edges[edge_f].from != u || edge_e == edge_f)
        throw std::invalid_argument("overlap_moment: edges must be distinct edges leaving u");

    // Candidates inside piece e, kept only when certified within the closed
    // r-neighbourhood of piece f.
    Path piece_f = make_path(g, {edge_f});
    RationalBox fbox = cylinder_box_exact(g, hulls, piece_f);
    auto cands = candidate_points(g, hulls, u, r * opts.candidate_scale, opts.path_cap, edge_e);
    std::vector<Candidate> strip;
    for (auto& c : cands) {
        // Cheap box prefilter before the branch-and-bound distance.
        Rational gap = c.x < fbox.lo[0] ? fbox.lo[0] - c.x
                                        : (c.x > fbox.hi[0] ? c.x - fbox.hi[0] : Rational(0));
        if (gap > r) continue;
        auto d = point_set_distance(g, hulls, c.x, piece_f);
        if (d.hi <= r) strip.push_back(std::move(c));  // certified inside; else drop conservatively
    }

    if (strip.empty()) {
        PackingEstimate est;
        est.r = to_double(r);
        est.q = q;
        est.value = 0;
        est.value_interval = Interval(0.0);
        est.exact = false;
        return est;
    }
    if (q == 0) {
        // Counting case: sweep over the strip candidates.
        const Rational two_r = 2 * r;
        auto sel = sweep_select(strip, two_r);
        PackingEstimate est;
        est.r = to_double(r);
        est.q = 0;
        est.value = static_cast<double>(sel.size());
        est.value_interval = Interval(est.value);
        est.exact = false;  // strip candidates are a sample of the overlap set
        for (std::size_t i : sel) {
            est.centers.push_back({strip[i].x});
            est.center_ids.push_back(strip[i].id);
        }
        return est;
    }
    return greedy_moment(g, hulls, u, q, r, opts, std::move(strip));
}

double ball_count_bound(double c1, double c2, int m) {
    if (!(c1 > 0) || !(c2 > 0)) throw std::invalid_argument("ball_count_bound: c1, c2 must be > 0");
    return std::pow((1 + 2 * c2) / c1, m);
}

PowerSumCheck power_sum_check(double p, const std::vector<double>& values, double C) {
    if (C < static_cast<double>(values.size()))
        throw std::invalid_argument("power_sum_check: C must be >= count");
    double sum = 0, sum_p = 0;
    for (double a : values) {
        sum += a;
        sum_p += std::pow(a, p);
    }
    PowerSumCheck out;
    out.lhs = std::pow(sum, p);
    out.rhs = std::max(1.0, std::pow(C, p - 1)) * sum_p;
    // One-sided rounding guard keeps exact-equality cases on the passing side.
    out.holds = out.lhs <= out.rhs * (1 + 1e-12) + 1e-300;
    return out;
}

}  // namespace gifs
