#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gifs/geometry.hpp"
#include "gifs/separation.hpp"
#include "gifs/spectral.hpp"

using namespace gifs;

namespace {

NonnegMatrix mat2(double a, double b, double c, double d) {
    NonnegMatrix m(2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 0) = c;
    m.at(1, 1) = d;
    return m;
}

// Scalar bisection oracle for a strictly decreasing function.
double bisect_root(double lo, double hi, const std::function<double(double)>& f) {
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("irreducibility of small matrices") {
    CHECK(is_irreducible(mat2(0, 1, 1, 0)));
    CHECK_FALSE(is_irreducible(mat2(1, 1, 0, 1)));
    NonnegMatrix one(1);
    one.at(0, 0) = 1;
    CHECK(is_irreducible(one));
}

TEST_CASE("primitivity index from cycle structure") {
    CHECK(primitivity_index(mat2(0, 1, 1, 0)) == 2);
    CHECK(primitivity_index(mat2(1, 1, 1, 0)) == 1);
    CHECK(primitivity_index(mat2(0.5, 1, 1, 0.25)) == 1);  // positive diagonal entry
    CHECK_THROWS_AS(primitivity_index(mat2(1, 1, 0, 1)), NotIrreducible);
}

TEST_CASE("spectral radius on reference matrices") {
    NonnegMatrix scalar(1);
    scalar.at(0, 0) = 2;
    CHECK(spectral_radius(scalar).rho == doctest::Approx(2.0).epsilon(1e-13));

    auto perm = spectral_radius(mat2(0, 1, 1, 0));
    CHECK(perm.rho == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(perm.residual < 1e-12);

    auto pd = spectral_radius(mat2(1, 2, 3, 4));
    double expected = (5.0 + std::sqrt(33.0)) / 2.0;
    CHECK(std::fabs(pd.rho - expected) < 1e-12);
    CHECK(pd.residual < 1e-12);
    for (double v : pd.right_vector) CHECK(v > 0);
}

TEST_CASE("entrywise monotonicity and power identity of the radius") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        NonnegMatrix d(3);
        for (double& x : d.a) x = uni(rng);
        NonnegMatrix c = d;
        for (double& x : c.a) x *= uni(rng);
        double rc = spectral_radius(c).rho, rd = spectral_radius(d).rho;
        CHECK(rc <= rd * (1 + 1e-10));

        int k = 2 + static_cast<int>(rng() % 4);
        double rk = spectral_radius(matpow(d, k)).rho;
        CHECK(rk == doctest::Approx(std::pow(rd, k)).epsilon(1e-9));
    }
}

TEST_CASE("transfer matrix closed forms") {
    auto gC = fixtures::sysC();
    double beta0 = std::log(2.0) / std::log(3.0);
    NonnegMatrix a = transfer_matrix(gC, 0.0, beta0);
    CHECK(a.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

    auto g2 = fixtures::sys2V();
    double t = 0.37;
    NonnegMatrix a2 = transfer_matrix(g2, 0.0, t);
    CHECK(a2.at(0, 0) == doctest::Approx(std::pow(0.25, t)));
    CHECK(a2.at(0, 1) == doctest::Approx(std::pow(0.25, t)));
    CHECK(a2.at(1, 0) == doctest::Approx(std::pow(1.0 / 3.0, t)));
    CHECK(a2.at(1, 1) == doctest::Approx(std::pow(1.0 / 3.0, t)));

    // q = 1, s = 0 gives the row-stochastic matrix.
    for (const auto& g : {fixtures::sysC(), fixtures::sysW(), fixtures::sys2V()}) {
        NonnegMatrix st = transfer_matrix(g, 1.0, 0.0);
        for (int u = 0; u < st.n; ++u) {
            double row = 0;
            for (int v = 0; v < st.n; ++v) row += st.at(u, v);
            CHECK(row == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("matrix powers match path-sum entries") {
    auto g = fixtures::sys2V();
    double q = 1.3, s = 0.4;
    for (int l : {2, 3, 4}) {
        NonnegMatrix ml = transfer_matrix_power(g, q, s, l);
        for (int u = 0; u < g.vertex_count(); ++u)
            for (int v = 0; v < g.vertex_count(); ++v) {
                double sum = 0;
                for (const auto& p : enumerate_paths(g, u, l, v))
                    sum += std::pow(to_double(p.p_path), q) * std::pow(to_double(p.r_path), s);
                CHECK(ml.at(u, v) == doctest::Approx(sum).epsilon(1e-12));
            }
    }
}

TEST_CASE("pruned transfer matrix closed forms") {
    auto gT = fixtures::sysT();
    std::vector<Path> ellT = {make_path(gT, {0, 1})};  // e1 e2
    double gamma = 0.3;
    NonnegMatrix b = pruned_transfer_matrix(gT, 0.0, gamma, 2, ellT);
    CHECK(b.at(0, 0) == doctest::Approx(3.0 * std::pow(2.0, -2 * gamma)).epsilon(1e-13));

    auto gC = fixtures::sysC();
    std::vector<Path> ellC = {make_path(gC, {0, 1})};
    NonnegMatrix bc = pruned_transfer_matrix(gC, 1.0, 0.0, 2, ellC);
    CHECK(bc.at(0, 0) == doctest::Approx(0.75).epsilon(1e-14));

    // Pruned <= full entrywise, strictly at exactly n entries.
    auto g2 = fixtures::sys2V();
    auto hulls = component_hulls(g2);
    auto open_sets = default_open_sets(g2, hulls);
    auto interior = construct_ell_paths(g2, hulls, open_sets);
    NonnegMatrix full = transfer_matrix_power(g2, 0.7, 0.2, interior.l);
    NonnegMatrix pruned = pruned_transfer_matrix(g2, 0.7, 0.2, interior.l, interior.ell_paths);
    int strict = 0;
    for (int i = 0; i < full.n; ++i)
        for (int j = 0; j < full.n; ++j) {
            CHECK(pruned.at(i, j) <= full.at(i, j) + 1e-15);
            if (pruned.at(i, j) < full.at(i, j) - 1e-15) ++strict;
        }
    CHECK(strict == g2.vertex_count());
}

TEST_CASE("spectrum exponent closed forms") {
    auto gC = fixtures::sysC();
    double l23 = std::log(2.0) / std::log(3.0);
    for (double q : {-1.0, 0.0, 1.0, 2.0, 3.0})
        CHECK(std::fabs(spectrum_exponent(gC, q) - (1 - q) * l23) < 1e-9);

    auto gW = fixtures::sysW();
    CHECK(std::fabs(spectrum_exponent(gW, 2.0) - std::log(10.0 / 16.0) / std::log(3.0)) < 1e-9);

    for (const auto& g : {fixtures::sysC(), fixtures::sysW(), fixtures::sysNL(), fixtures::sysT(),
                          fixtures::sys2V()})
        CHECK(std::fabs(spectrum_exponent(g, 1.0)) < 1e-9);
}

TEST_CASE("overlap exponent closed forms") {
    auto gT = fixtures::sysT();
    std::vector<Path> ellT = {make_path(gT, {0, 1})};
    double base = std::log2(3.0) / 2.0;
    CHECK(std::fabs(overlap_exponent(gT, 0.0, 2, ellT) - base) < 1e-9);
    CHECK(std::fabs(overlap_exponent(gT, 1.0, 2, ellT) - (base - 1.0)) < 1e-9);

    auto gC = fixtures::sysC();
    std::vector<Path> ellC = {make_path(gC, {0, 1})};
    CHECK(std::fabs(overlap_exponent(gC, 0.0, 2, ellC) - 0.5) < 1e-9);
}

TEST_CASE("dimension values and the scalar oracle") {
    CHECK(std::fabs(hausdorff_dimension(fixtures::sysC()) - std::log(2.0) / std::log(3.0)) < 1e-12);
    CHECK(std::fabs(hausdorff_dimension(fixtures::sysT()) - 1.0) < 1e-12);

    double s2v = hausdorff_dimension(fixtures::sys2V());
    CHECK(std::fabs(std::pow(0.25, s2v) + std::pow(1.0 / 3.0, s2v) - 1.0) < 1e-12);
    double oracle = bisect_root(0.0, 2.0, [](double s) {
        return std::pow(0.25, s) + std::pow(1.0 / 3.0, s) - 1.0;
    });
    CHECK(std::fabs(s2v - oracle) < 1e-10);
}

TEST_CASE("radius of the transfer matrix decreases in the exponent and in q") {
    auto g = fixtures::sys2V();
    double prev_beta = std::numeric_limits<double>::infinity();
    for (double q = -2.0; q <= 4.01; q += 0.25) {
        double beta = spectrum_exponent(g, q);
        CHECK(std::fabs(spectral_radius(transfer_matrix(g, q, beta)).rho - 1.0) < 1e-12);
        CHECK(beta < prev_beta);
        prev_beta = beta;
        double r1 = spectral_radius(transfer_matrix(g, q, beta - 0.1)).rho;
        double r2 = spectral_radius(transfer_matrix(g, q, beta + 0.1)).rho;
        CHECK(r1 > 1.0);
        CHECK(r2 < 1.0);
    }
}

TEST_CASE("perron data is positive with tiny residuals on fixture matrices") {
    for (const auto& g : {fixtures::sysC(), fixtures::sys2V(), fixtures::sysNL()})
        for (double q : {0.0, 0.5, 1.0, 2.0}) {
            double beta = spectrum_exponent(g, q);
            auto pd = spectral_radius(transfer_matrix(g, q, beta));
            CHECK(pd.residual < 1e-12);
            for (double v : pd.right_vector) CHECK(v > 0);
        }
}

TEST_CASE("overlap exponent requires an irreducible pruned matrix") {
    // Removing the only u->v path at l=1 disconnects the support.
    auto g = fixtures::sys2V();
    std::vector<Path> ell = {make_path(g, {1}), make_path(g, {3})};  // e2: u->v, e4: v->v
    CHECK_THROWS_AS(overlap_exponent(g, 0.0, 1, ell), NotIrreducible);
}
