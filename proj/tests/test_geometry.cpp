#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "gifs/geometry.hpp"

using namespace gifs;

TEST_CASE("compose matches symbolic composition") {
    auto gC = fixtures::sysC();
    Similarity s = compose(gC, make_path(gC, {0, 1}));  // e1 then e2
    CHECK(s.scale == Rational(1, 9));
    CHECK(s.translate[0] == Rational(2, 9));  // x/9 + 2/9

    auto gT = fixtures::sysT();
    Similarity t = compose(gT, make_path(gT, {0, 1}));
    CHECK(t.scale == Rational(1, 4));
    CHECK(t.translate[0] == Rational(1, 4));  // x/4 + 1/4

    Similarity single = compose(gC, make_path(gC, {1}));
    CHECK(single.translate[0] == gC.edges[1].map.translate[0]);
    CHECK(single.scale == gC.edges[1].map.scale);
}

TEST_CASE("compose scale equals the cached ratio product") {
    auto g = fixtures::sys2V();
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> edges;
        int v = 0;
        int len = 1 + static_cast<int>(rng() % 20);
        for (int i = 0; i < len; ++i) {
            const auto& out = g.out_edges[v];
            int e = out[rng() % out.size()];
            edges.push_back(e);
            v = g.edges[e].to;
        }
        Path p = make_path(g, edges);
        CHECK(compose(g, p).scale == p.r_path);
    }
}

TEST_CASE("component hulls are exact unit intervals on the fixtures") {
    for (const auto& g : {fixtures::sysC(), fixtures::sysT(), fixtures::sysNL(), fixtures::sys2V(),
                          fixtures::sysD()}) {
        auto hulls = component_hulls(g);
        REQUIRE(hulls.exact);
        for (int u = 0; u < g.vertex_count(); ++u) {
            CHECK(hulls.exact_boxes[u].lo[0] == 0);
            CHECK(hulls.exact_boxes[u].hi[0] == 1);
            CHECK(hulls.exact_diameter[u] == 1);
        }
    }
}

TEST_CASE("hull invariance: edge images stay inside the hull") {
    auto g = fixtures::sys2V();
    auto hulls = component_hulls(g);
    for (const auto& e : g.edges) {
        RationalBox img = exact_image(e.map, hulls.exact_boxes[e.to]);
        CHECK(img.lo[0] >= hulls.exact_boxes[e.from].lo[0]);
        CHECK(img.hi[0] <= hulls.exact_boxes[e.from].hi[0]);
    }
}

TEST_CASE("deterministic clouds at small depth") {
    auto g = fixtures::sysC();
    auto hulls = component_hulls(g);

    auto c1 = attractor_points(g, hulls, 0, 1);
    REQUIRE(c1.points.size() == 2);
    CHECK(c1.points[0][0] == doctest::Approx(0.0));
    CHECK(c1.points[1][0] == doctest::Approx(2.0 / 3.0));
    CHECK(c1.resolution == doctest::Approx(1.0 / 3.0));

    auto c2 = attractor_points(g, hulls, 0, 2);
    REQUIRE(c2.points.size() == 4);
    CHECK(c2.points[0][0] == doctest::Approx(0.0));
    CHECK(c2.points[1][0] == doctest::Approx(2.0 / 9.0));
    CHECK(c2.points[2][0] == doctest::Approx(2.0 / 3.0));
    CHECK(c2.points[3][0] == doctest::Approx(8.0 / 9.0));
    CHECK(c2.resolution == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("cloud count equals path count and clouds are self-similar") {
    auto g = fixtures::sys2V();
    auto hulls = component_hulls(g);
    auto c3 = attractor_points(g, hulls, 0, 3);
    CHECK(c3.points.size() == enumerate_paths(g, 0, 3).size());

    // Depth-(k+1) cloud at u = union over edges of edge images of depth-k clouds.
    auto c2u = attractor_points(g, hulls, 0, 2);
    auto c2v = attractor_points(g, hulls, 1, 2);
    std::set<double> expected;
    for (int e : g.out_edges[0]) {
        const auto& child = g.edges[e].to == 0 ? c2u : c2v;
        for (const auto& pt : child.points)
            expected.insert(to_double(g.edges[e].map.apply1(rational_from_double(pt[0]))));
    }
    std::set<double> got;
    for (const auto& pt : c3.points) got.insert(pt[0]);
    CHECK(got == expected);
}

TEST_CASE("chaos clouds are seed-reproducible") {
    auto g = fixtures::sysNL();
    auto hulls = component_hulls(g);
    CloudOptions opts;
    opts.mode = CloudMode::Chaos;
    opts.chaos_count = 64;
    opts.seed = 42;
    auto a = attractor_points(g, hulls, 0, 12, opts);
    auto b = attractor_points(g, hulls, 0, 12, opts);
    CHECK(a.points == b.points);
    opts.seed = 43;
    auto c = attractor_points(g, hulls, 0, 12, opts);
    CHECK(a.points != c.points);
    for (const auto& pt : a.points) {
        CHECK(pt[0] >= 0.0);
        CHECK(pt[0] <= 1.0);
    }
}

TEST_CASE("set distance from level-1 cylinder covers") {
    auto gC = fixtures::sysC();
    auto hulls = component_hulls(gC);
    auto covA = std::vector<CoverElement>{cylinder_cover_element(gC, hulls, make_path(gC, {0}))};
    auto covB = std::vector<CoverElement>{cylinder_cover_element(gC, hulls, make_path(gC, {1}))};
    auto d = set_distance(covA, covB);
    CHECK(d.exact);
    CHECK(d.lo == Rational(1, 3));

    auto self = set_distance(covA, covA);
    CHECK(self.lo == 0);
    CHECK(self.hi == 0);

    auto gN = fixtures::sysNL();
    auto hullsN = component_hulls(gN);
    auto a = std::vector<CoverElement>{cylinder_cover_element(gN, hullsN, make_path(gN, {0}))};
    auto b = std::vector<CoverElement>{cylinder_cover_element(gN, hullsN, make_path(gN, {1}))};
    auto dn = set_distance(a, b);
    CHECK(dn.exact);
    CHECK(dn.lo == Rational(1, 6));
}

TEST_CASE("branch-and-bound cylinder distance certifies touching pieces") {
    auto gT = fixtures::sysT();
    auto hulls = component_hulls(gT);
    auto d = cylinder_set_distance(gT, hulls, make_path(gT, {0}), make_path(gT, {1}));
    CHECK(d.exact);
    CHECK(d.lo == 0);
    REQUIRE(d.touch_point.has_value());
    CHECK((*d.touch_point)[0] == Rational(1, 2));
}

TEST_CASE("code_to_point addresses cylinder representatives") {
    auto g = fixtures::sysC();
    auto hulls = component_hulls(g);
    for (int k : {1, 3, 6}) {
        auto cp = code_to_point(g, hulls, make_path(g, std::vector<int>(k, 0)));
        CHECK(cp.point[0] == 0);
        CHECK(cp.error_radius == rational_pow(Rational(1, 3), k));
        auto cq = code_to_point(g, hulls, make_path(g, std::vector<int>(k, 1)));
        CHECK(cq.point[0] == 1);
    }
    // e1 then e2 forever lands on S_e1(1) = 1/3.
    std::vector<int> tail{0, 1, 1, 1, 1, 1, 1, 1};
    auto cp = code_to_point(g, hulls, make_path(g, tail));
    CHECK(to_double(cp.point[0]) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("2-D right-angle similarity images are exact") {
    Similarity s;
    s.dim = 2;
    s.scale = Rational(1, 2);
    s.angle_deg = Rational(90);
    s.translate = {Rational(1), Rational(0)};
    RationalBox b{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}};
    RationalBox img = exact_image(s, b);
    // Rot90 maps [0,1]^2 to [-1,0]x[0,1]; scaled and shifted.
    CHECK(img.lo[0] == Rational(1, 2));
    CHECK(img.hi[0] == Rational(1));
    CHECK(img.lo[1] == Rational(0));
    CHECK(img.hi[1] == Rational(1, 2));

    CertifiedBox cb = certified_image(s, certify(b));
    CHECK(cb.axes[0].lo <= 0.5);
    CHECK(cb.axes[0].hi >= 1.0);
}
