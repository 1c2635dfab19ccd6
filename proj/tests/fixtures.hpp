#pragma once

#include "gifs/graph.hpp"

// Small reference systems used across the test suites. All parameters are
// exact rationals; attractor hulls are [0,1] in every case.
namespace fixtures {

using gifs::GraphIFS;
using gifs::Rational;

inline gifs::Similarity map1(const Rational& scale, const Rational& translate, int sign = +1) {
    gifs::Similarity s;
    s.dim = 1;
    s.scale = scale;
    s.sign = sign;
    s.translate = {translate};
    return s;
}

inline gifs::Edge edge1(std::string id, int from, int to, const Rational& ratio,
                        const Rational& prob, const Rational& translate) {
    gifs::Edge e;
    e.id = std::move(id);
    e.from = from;
    e.to = to;
    e.ratio = ratio;
    e.prob = prob;
    e.map = map1(ratio, translate);
    return e;
}

// Middle-third Cantor system, uniform weights.
inline GraphIFS sysC() {
    GraphIFS g;
    g.ambient_dim = 1;
    g.vertices = {"u"};
    g.edges = {edge1("e1", 0, 0, {1, 3}, {1, 2}, {0}),
               edge1("e2", 0, 0, {1, 3}, {1, 2}, {2, 3})};
    g.open_sets.resize(1);
    g.index();
    return g;
}

// Cantor system with skewed weights 1/4, 3/4.
inline GraphIFS sysW() {
    GraphIFS g = sysC();
    g.edges[0].prob = {1, 4};
    g.edges[1].prob = {3, 4};
    return g;
}

// Non-lattice system: ratios 1/3 and 1/2.
inline GraphIFS sysNL() {
    GraphIFS g;
    g.ambient_dim = 1;
    g.vertices = {"u"};
    g.edges = {edge1("e1", 0, 0, {1, 3}, {1, 2}, {0}),
               edge1("e2", 0, 0, {1, 2}, {1, 2}, {1, 2})};
    g.open_sets.resize(1);
    g.index();
    return g;
}

// Touching halves of [0,1].
inline GraphIFS sysT() {
    GraphIFS g;
    g.ambient_dim = 1;
    g.vertices = {"u"};
    g.edges = {edge1("e1", 0, 0, {1, 2}, {1, 2}, {0}),
               edge1("e2", 0, 0, {1, 2}, {1, 2}, {1, 2})};
    g.open_sets.resize(1);
    g.index();
    return g;
}

// Two-vertex system with ratios 1/4 at u and 1/3 at v.
inline GraphIFS sys2V() {
    GraphIFS g;
    g.ambient_dim = 1;
    g.vertices = {"u", "v"};
    g.edges = {edge1("e1", 0, 0, {1, 4}, {1, 2}, {0}),
               edge1("e2", 0, 1, {1, 4}, {1, 2}, {3, 4}),
               edge1("e3", 1, 0, {1, 3}, {1, 2}, {0}),
               edge1("e4", 1, 1, {1, 3}, {1, 2}, {2, 3})};
    g.open_sets.resize(2);
    g.index();
    return g;
}

// Lattice variant with ratios 1/4 and 1/8 (span ln 2).
inline GraphIFS sysD() {
    GraphIFS g;
    g.ambient_dim = 1;
    g.vertices = {"u"};
    g.edges = {edge1("e1", 0, 0, {1, 4}, {1, 2}, {0}),
               edge1("e2", 0, 0, {1, 8}, {1, 2}, {7, 8})};
    g.open_sets.resize(1);
    g.index();
    return g;
}

}  // namespace fixtures
