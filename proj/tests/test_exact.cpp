#include <doctest.h>

#include <cmath>
#include <random>

#include "gifs/interval.hpp"
#include "gifs/log_vector.hpp"
#include "gifs/rational.hpp"

using namespace gifs;

TEST_CASE("rational_parse accepts and reduces") {
    CHECK(rational_parse("1/3") == Rational(1, 3));
    CHECK(rational_parse("2/6") == Rational(1, 3));
    CHECK(rational_parse("7") == Rational(7));
    CHECK(rational_parse("-3/9") == Rational(-1, 3));
    CHECK(rational_den(rational_parse("-3/9")) == 1 * 3);
}

TEST_CASE("rational_parse rejects malformed input") {
    CHECK_THROWS_AS(rational_parse("3/0"), ParseError);
    CHECK_THROWS_AS(rational_parse(""), ParseError);
    CHECK_THROWS_AS(rational_parse("a/b"), ParseError);
    CHECK_THROWS_AS(rational_parse("1/-2"), ParseError);
    CHECK_THROWS_AS(rational_parse("1.5"), ParseError);
}

TEST_CASE("rational_from_double is exact") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-10, 10);
    for (int i = 0; i < 200; ++i) {
        double x = uni(rng);
        CHECK(to_double(rational_from_double(x)) == x);
    }
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(-0.75) == Rational(-3, 4));
}

TEST_CASE("log_vector on reference inputs") {
    auto v = log_vector(Rational(1, 3));
    REQUIRE(v.has_value());
    CHECK(v->exponents == std::map<std::int64_t, std::int64_t>{{3, -1}});

    auto ln12 = log_vector(Rational(12));
    REQUIRE(ln12.has_value());
    CHECK(ln12->exponents == std::map<std::int64_t, std::int64_t>{{2, 2}, {3, 1}});

    auto one = log_vector(Rational(1));
    REQUIRE(one.has_value());
    CHECK(one->is_zero());
}

TEST_CASE("log_vector undecidable beyond the factor bound") {
    CHECK_FALSE(log_vector(Rational(1, 1000003)).has_value());
    CHECK(log_vector(Rational(1, 999983)).has_value());  // largest prime below 1e6
}

TEST_CASE("log_vector round-trip and additivity") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(1, 400);
    for (int i = 0; i < 100; ++i) {
        Rational a(num(rng), num(rng));
        Rational b(num(rng), num(rng));
        auto va = log_vector(a), vb = log_vector(b), vab = log_vector(a * b);
        REQUIRE(va);
        REQUIRE(vb);
        REQUIRE(vab);
        CHECK(*va + *vb == *vab);
        CHECK(std::fabs(va->value() - std::log(to_double(a))) <=
              1e-12 * std::max(1.0, std::fabs(std::log(to_double(a)))));
        CHECK(va->to_rational() == a);
    }
}

namespace {
LogVector lv(const Rational& r) { return *log_vector(r); }
}  // namespace

TEST_CASE("discrete_span on parallel and non-parallel inputs") {
    auto span = discrete_span({lv(Rational(3)), lv(Rational(9))});
    REQUIRE(span.discrete);
    CHECK(span.generator == lv(Rational(3)));
    CHECK(span.multipliers == std::vector<Rational>{Rational(1), Rational(2)});

    CHECK_FALSE(discrete_span({lv(Rational(2)), lv(Rational(3))}).discrete);

    auto single = discrete_span({lv(Rational(3))});
    REQUIRE(single.discrete);
    CHECK(single.generator == lv(Rational(3)));
    CHECK(single.multipliers == std::vector<Rational>{Rational(1)});

    // Coprime coefficients on a common direction: gcd span below each input.
    auto co = discrete_span({lv(Rational(4)), lv(Rational(8))});
    REQUIRE(co.discrete);
    CHECK(co.generator == lv(Rational(2)));
    CHECK(co.multipliers == std::vector<Rational>{Rational(2), Rational(3)});
}

TEST_CASE("discrete_span invariance and reconstruction") {
    std::vector<LogVector> base = {lv(Rational(4)), lv(Rational(32)), lv(Rational(8))};
    auto a = discrete_span(base);
    auto b = discrete_span({base[2], base[0], base[1], base[0]});
    REQUIRE(a.discrete);
    REQUIRE(b.discrete);
    CHECK(a.generator == b.generator);
    for (std::size_t i = 0; i < base.size(); ++i) {
        REQUIRE(rational_den(a.multipliers[i]) == 1);
        auto k = rational_num(a.multipliers[i]).convert_to<std::int64_t>();
        CHECK(a.generator * k == base[i]);
    }
}

TEST_CASE("interval arithmetic encloses exact rational results") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(1, 50);
    for (int i = 0; i < 300; ++i) {
        Rational a(num(rng), den(rng));
        Rational b(num(rng), den(rng));
        Interval ia = iv_from_rational(a), ib = iv_from_rational(b);
        CHECK(iv_add(ia, ib).contains(to_double(a + b)));
        CHECK(iv_sub(ia, ib).contains(to_double(a - b)));
        CHECK(iv_mul(ia, ib).contains(to_double(a * b)));
        CHECK(iv_from_rational(a + b).contains(to_double(a + b)));
    }
}
