#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gifs/measure.hpp"

using namespace gifs;

TEST_CASE("cylinder measures are path probabilities") {
    auto gC = fixtures::sysC();
    CHECK(cylinder_measure(gC, make_path(gC, {0})) == Rational(1, 2));

    auto gW = fixtures::sysW();
    CHECK(cylinder_measure(gW, make_path(gW, {0, 1})) == Rational(3, 16));

    for (int k = 1; k <= 6; ++k) {
        Rational sum(0);
        for (const auto& p : enumerate_paths(gW, 0, k)) sum += cylinder_measure(gW, p);
        CHECK(sum == 1);
    }
}

TEST_CASE("ball measure collapses exactly on aligned balls") {
    auto g = fixtures::sysC();
    auto hulls = component_hulls(g);
    auto mi = ball_measure(g, hulls, 0, std::vector<Rational>{Rational(0)}, Rational(1, 3));
    CHECK(mi.exact_lo == Rational(1, 2));
    CHECK(mi.exact_hi == Rational(1, 2));
    CHECK(mi.lo == 0.5);
    CHECK(mi.hi == 0.5);
}

TEST_CASE("ball measure matches Lebesgue length on the touching system") {
    auto g = fixtures::sysT();
    auto hulls = component_hulls(g);

    auto mi = ball_measure(g, hulls, 0, std::vector<Rational>{Rational(1, 4)}, Rational(1, 10));
    CHECK(mi.lo <= 0.2);
    CHECK(mi.hi >= 0.2);
    CHECK(mi.hi - mi.lo < 1e-9 * 2);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(0.0, 1.0), ur(0.01, 0.6);
    for (int i = 0; i < 50; ++i) {
        Rational x = rational_from_double(ux(rng));
        Rational r = rational_from_double(ur(rng));
        auto m = ball_measure(g, hulls, 0, std::vector<Rational>{x}, r, {1e-6, 40});
        Rational exact = std::min(Rational(x + r), Rational(1)) - std::max(Rational(x - r), Rational(0));
        if (exact < 0) exact = 0;
        CHECK(m.exact_lo <= exact);
        CHECK(m.exact_hi >= exact);
        CHECK(m.hi - m.lo < 2e-6);
    }
}

TEST_CASE("whole-component balls have full mass") {
    for (const auto& g : {fixtures::sysC(), fixtures::sys2V()}) {
        auto hulls = component_hulls(g);
        for (int u = 0; u < g.vertex_count(); ++u) {
            auto mi = ball_measure(g, hulls, u, std::vector<Rational>{Rational(1, 2)}, Rational(2));
            CHECK(mi.exact_lo == 1);
            CHECK(mi.exact_hi == 1);
        }
    }
}

TEST_CASE("brackets narrow with depth and never widen") {
    auto g = fixtures::sysC();
    auto hulls = component_hulls(g);
    Rational x = rational_from_double(0.4123);
    Rational r = rational_from_double(0.17);
    double prev_width = 2;
    for (int depth : {4, 8, 12, 16, 20, 30}) {
        MeasureOptions opts{0.0, depth};  // zero tolerance: run to the depth cap
        auto mi = ball_measure(g, hulls, 0, std::vector<Rational>{x}, r, opts);
        double width = mi.hi - mi.lo;
        CHECK(width <= prev_width + 1e-15);
        prev_width = width;
    }
    CHECK(prev_width < 1e-3);
}

TEST_CASE("ball mass is monotone in the radius") {
    auto g = fixtures::sysNL();
    auto hulls = component_hulls(g);
    Rational x = rational_from_double(0.3);
    double prev_lo = -1, prev_hi = -1;
    for (double r : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        auto mi = ball_measure(g, hulls, 0, std::vector<Rational>{x}, rational_from_double(r));
        CHECK(mi.lo >= prev_lo);
        CHECK(mi.hi >= prev_hi);
        prev_lo = mi.lo;
        prev_hi = mi.hi;
    }
}

TEST_CASE("support points carry positive mass at every scale") {
    auto g = fixtures::sysC();
    auto hulls = component_hulls(g);
    // 2/9 is a level-2 cylinder endpoint, hence a point of the component.
    for (double r : {0.3, 0.1, 0.03, 0.01, 0.003}) {
        auto mi = ball_measure(g, hulls, 0, std::vector<Rational>{Rational(2, 9)},
                               rational_from_double(r));
        CHECK(mi.lo > 0);
    }
}

TEST_CASE("invariance: pulled-back child brackets overlap the parent bracket") {
    auto g = fixtures::sysT();
    auto hulls = component_hulls(g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.05, 0.95), ur(0.02, 0.2);
    for (int i = 0; i < 20; ++i) {
        Rational x = rational_from_double(ux(rng));
        Rational r = rational_from_double(ur(rng));
        MeasureOptions tight{1e-9, 40};
        auto parent = ball_measure(g, hulls, 0, std::vector<Rational>{x}, r, tight);
        // Sum over edges of p_e * mu(S_e^{-1}(B)); preimage of an interval
        // under x -> x/2 + t is an interval of doubled radius.
        double lo = 0, hi = 0;
        for (int e : g.out_edges[0]) {
            const auto& map = g.edges[e].map;
            Rational cx = (x - map.translate[0]) / map.coeff1();
            Rational cr = r / map.scale;
            auto child = ball_measure(g, hulls, g.edges[e].to, std::vector<Rational>{cx}, cr, tight);
            lo += to_double(g.edges[e].prob) * child.lo;
            hi += to_double(g.edges[e].prob) * child.hi;
        }
        CHECK(parent.hi >= lo - 4e-9);
        CHECK(parent.lo <= hi + 4e-9);
        CHECK(parent.hi - parent.lo <= 2e-9 + 1e-12);
    }
}
