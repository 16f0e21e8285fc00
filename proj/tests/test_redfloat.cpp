#include <doctest.h>

#include <cmath>
#include <random>

#include "ckkstream/redfloat.hpp"

using namespace cks;

TEST_CASE("rounding identities") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1e9, 1e9);
    const RedFloatFormat full(52);

    SUBCASE("m = 52 is the identity on doubles") {
        for (int i = 0; i < 100000; ++i) {
            const double x = dist(rng);
            CHECK(round_to_format(x, full) == x);
        }
    }
    SUBCASE("values below the mantissa resolution vanish") {
        CHECK(round_to_format(1.0 + 0x1.0p-50, RedFloatFormat(43)) == 1.0);
        CHECK(round_to_format(1.0 + 0x1.0p-42, RedFloatFormat(43)) != 1.0);
    }
    SUBCASE("rounding error bounded by 2^(e-m)") {
        for (uint32_t m : {20u, 30u, 43u, 50u}) {
            const RedFloatFormat fmt(m);
            for (int i = 0; i < 250000; ++i) {
                const double x = dist(rng);
                if (x == 0.0) continue;
                const double r = round_to_format(x, fmt);
                int e;
                std::frexp(x, &e);  // x = f * 2^e, f in [0.5, 1)
                CHECK(std::fabs(r - x) <= std::ldexp(1.0, e - 1 - (int)m));
            }
        }
    }
    SUBCASE("idempotent") {
        const RedFloatFormat fmt(30);
        for (int i = 0; i < 10000; ++i) {
            const double r = round_to_format(dist(rng), fmt);
            CHECK(round_to_format(r, fmt) == r);
        }
    }
    SUBCASE("format bounds enforced") {
        CHECK_THROWS_AS(RedFloatFormat(9), std::invalid_argument);
        CHECK_THROWS_AS(RedFloatFormat(53), std::invalid_argument);
    }
}

TEST_CASE("arithmetic matches native doubles at m = 52") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    const RedFloatFormat full(52);
    for (int i = 0; i < 100000; ++i) {
        const double a = dist(rng), b = dist(rng);
        CHECK(red_add(a, b, full) == a + b);
        CHECK(red_mul(a, b, full) == a * b);
    }
}

TEST_CASE("basic algebraic identities") {
    const RedFloatFormat fmt(43);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = round_to_format(dist(rng), fmt);
        CHECK(red_mul(a, 1.0, fmt) == a);
        CHECK(red_add(a, -a, fmt) == 0.0);
    }
}

TEST_CASE("complex multiply") {
    const RedFloatFormat full(52);
    SUBCASE("unit and i*i") {
        const RedComplex a{3.25, -1.5};
        const RedComplex one{1.0, 0.0};
        const RedComplex i{0.0, 1.0};
        const auto same = red_complex_mul(a, one, full);
        CHECK(same.re == a.re);
        CHECK(same.im == a.im);
        const auto minus_one = red_complex_mul(i, i, full);
        CHECK(minus_one.re == -1.0);
        CHECK(minus_one.im == 0.0);
    }
    SUBCASE("m = 52 equals native complex arithmetic") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> dist(-10.0, 10.0);
        for (int i = 0; i < 100000; ++i) {
            const RedComplex a{dist(rng), dist(rng)}, b{dist(rng), dist(rng)};
            const auto got = red_complex_mul(a, b, full);
            CHECK(got.re == a.re * b.re - a.im * b.im);
            CHECK(got.im == a.re * b.im + a.im * b.re);
        }
    }
    SUBCASE("uses exactly four multiplies and two adds") {
        RedOpCount ops;
        red_complex_mul({1.5, 2.5}, {-0.5, 3.0}, RedFloatFormat(43), &ops);
        CHECK(ops.mul == 4);
        CHECK(ops.add == 2);
        CHECK(ops.overflow == 0);
    }
    SUBCASE("overflow saturates to infinity and raises the range flag") {
        RedOpCount ops;
        const double huge = 1e308;
        const double r = red_mul(huge, huge, RedFloatFormat(43), &ops);
        CHECK(std::isinf(r));
        CHECK(ops.overflow == 1);
    }
}
