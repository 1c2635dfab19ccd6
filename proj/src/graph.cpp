#include "gifs/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace gifs {

int GraphIFS::vertex_index(const std::string& name) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (vertices[i] == name) return i;
    return -1;
}

void GraphIFS::index() {
    out_edges.assign(vertices.size(), {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
        out_edges[edges[e].from].push_back(e);
    for (auto& list : out_edges)
        std::sort(list.begin(), list.end(),
                  [&](int a, int b) { return edges[a].id < edges[b].id; });
}

Path make_path(const GraphIFS& g, std::vector<int> edge_indices) {
    if (edge_indices.empty()) throw std::invalid_argument("make_path: empty edge list");
    Path p;
    p.edges = std::move(edge_indices);
    p.from = g.edges[p.edges.front()].from;
    p.to = g.edges[p.edges.back()].to;
    p.r_path = Rational(1);
    p.p_path = Rational(1);
    int prev_to = p.from;
    for (int e : p.edges) {
        if (g.edges[e].from != prev_to) throw std::invalid_argument("make_path: edges not consecutive");
        prev_to = g.edges[e].to;
        p.r_path *= g.edges[e].ratio;
        p.p_path *= g.edges[e].prob;
    }
    return p;
}

std::string path_id(const GraphIFS& g, const Path& p) {
    std::string s;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        if (i) s += '-';
        s += g.edges[p.edges[i]].id;
    }
    return s;
}

ValidationReport validate(const GraphIFS& g) {
    ValidationReport rep;
    auto add = [&](const std::string& m) { rep.violations.push_back({m}); };

    if (g.ambient_dim != 1 && g.ambient_dim != 2)
        add("ambient dimension must be 1 or 2, got " + std::to_string(g.ambient_dim));
    if (g.vertices.empty()) add("no vertices");

    std::set<std::string> vnames(g.vertices.begin(), g.vertices.end());
    if (vnames.size() != g.vertices.size()) add("duplicate vertex ids");
    std::set<std::string> enames;
    for (const auto& e : g.edges)
        if (!enames.insert(e.id).second) add("duplicate edge id '" + e.id + "'");

    const int n = g.vertex_count();
    for (const auto& e : g.edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
            add("edge '" + e.id + "' references unknown vertex");
            continue;
        }
        if (!(e.ratio > 0 && e.ratio < 1))
            add("edge '" + e.id + "': ratio " + rational_str(e.ratio) + " outside (0,1)");
        if (!(e.prob > 0 && e.prob < 1))
            add("edge '" + e.id + "': probability " + rational_str(e.prob) + " outside (0,1)");
        if (e.map.scale != e.ratio)
            add("edge '" + e.id + "': map scale " + rational_str(e.map.scale) +
                " differs from ratio " + rational_str(e.ratio));
        if (e.map.dim != g.ambient_dim || static_cast<int>(e.map.translate.size()) != g.ambient_dim)
            add("edge '" + e.id + "': map dimension mismatch");
    }

    for (int u = 0; u < n; ++u) {
        int outdeg = 0;
        Rational psum(0);
        for (const auto& e : g.edges)
            if (e.from == u) {
                ++outdeg;
                psum += e.prob;
            }
        if (outdeg < 2)
            add("vertex " + g.vertices[u] + " has " + std::to_string(outdeg) + " < 2 out-edges");
        if (outdeg > 0 && psum != 1)
            add("vertex " + g.vertices[u] + ": probabilities sum " + rational_str(psum) + " != 1");
    }

    // Strong connectivity via reachability closure.
    if (n > 0) {
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (int u = 0; u < n; ++u) reach[u][u] = true;
        for (const auto& e : g.edges)
            if (e.from >= 0 && e.from < n && e.to >= 0 && e.to < n) reach[e.from][e.to] = true;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                if (reach[i][k])
                    for (int j = 0; j < n; ++j)
                        if (reach[k][j]) reach[i][j] = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!reach[i][j])
                    add("not strongly connected: no path " + g.vertices[i] + " -> " + g.vertices[j]);
    }

    for (int u = 0; u < n && u < static_cast<int>(g.open_sets.size()); ++u) {
        const auto& box = g.open_sets[u];
        if (!box) continue;
        if (box->dim() != g.ambient_dim) {
            add("open set at " + g.vertices[u] + ": dimension mismatch");
            continue;
        }
        for (int a = 0; a < box->dim(); ++a)
            if (!(box->lo[a] < box->hi[a]))
                add("open set at " + g.vertices[u] + ": empty box");
    }
    return rep;
}

namespace {

void enumerate_rec(const GraphIFS& g, int u, int k, std::optional<int> v,
                   std::vector<int>& stack, std::vector<Path>& out, std::uint64_t cap) {
    if (k == 0) {
        if (!v || g.edges[stack.back()].to == *v) {
            if (out.size() >= cap)
                throw PathCapExceeded("path enumeration exceeds cap of " + std::to_string(cap));
            out.push_back(make_path(g, stack));
        }
        return;
    }
    for (int e : g.out_edges[u]) {
        stack.push_back(e);
        enumerate_rec(g, g.edges[e].to, k - 1, v, stack, out, cap);
        stack.pop_back();
    }
}

}  // namespace

std::vector<Path> enumerate_paths(const GraphIFS& g, int u, int k, std::optional<int> v,
                                  std::uint64_t cap) {
    if (k < 1) throw std::invalid_argument("enumerate_paths: k must be >= 1");
    std::vector<Path> out;
    std::vector<int> stack;
    enumerate_rec(g, u, k, v, stack, out, cap);
    return out;
}

namespace {

void stopping_rec(const GraphIFS& g, int vertex, const Rational& r,
                  const std::vector<Rational>& diam, std::vector<int>& stack,
                  Rational r_acc, std::vector<Path>& out, std::uint64_t cap) {
    for (int e : g.out_edges[vertex]) {
        Rational r_next = r_acc * g.edges[e].ratio;
        stack.push_back(e);
        if (r_next * diam[g.edges[e].to] < r) {
            if (out.size() >= cap)
                throw PathCapExceeded("stopping set exceeds cap of " + std::to_string(cap));
            out.push_back(make_path(g, stack));
        } else {
            stopping_rec(g, g.edges[e].to, r, diam, stack, r_next, out, cap);
        }
        stack.pop_back();
    }
}

}  // namespace

std::vector<Path> stopping_paths(const GraphIFS& g, int u, const Rational& r,
                                 const std::vector<Rational>& diameters, std::uint64_t cap) {
    if (!(r > 0)) throw std::invalid_argument("stopping_paths: r must be > 0");
    std::vector<Path> out;
    if (r > diameters[u]) return out;  // prefix condition fails for every length-1 path
    std::vector<int> stack;
    stopping_rec(g, u, r, diameters, stack, Rational(1), out, cap);
    return out;
}

bool is_subpath(const Path& f, const Path& g) {
    if (f.edges.size() > g.edges.size()) return false;
    return std::search(g.edges.begin(), g.edges.end(), f.edges.begin(), f.edges.end()) !=
           g.edges.end();
}

}  // namespace gifs
