#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ckkstream/prng.hpp"

using namespace cks;

TEST_CASE("seed parsing") {
    const auto s = Seed128::from_hex("000102030405060708090a0b0c0d0e0f");
    CHECK(s.to_hex() == "000102030405060708090a0b0c0d0e0f");
    CHECK(Seed128::from_hex("0x000102030405060708090a0b0c0d0e0f") == s);
    CHECK_THROWS_AS(Seed128::from_hex("abcd"), std::invalid_argument);
    CHECK_THROWS_AS(Seed128::from_hex("zz0102030405060708090a0b0c0d0e0f"),
                    std::invalid_argument);
}

TEST_CASE("streams are deterministic and tag-separated") {
    const auto seed = Seed128::from_hex("deadbeefdeadbeefdeadbeefdeadbeef");
    auto a1 = prng_expand(seed, "tag-a", 256, SampleDist::Uniform, 65537);
    auto a2 = prng_expand(seed, "tag-a", 256, SampleDist::Uniform, 65537);
    auto b = prng_expand(seed, "tag-b", 256, SampleDist::Uniform, 65537);
    CHECK(a1 == a2);
    CHECK(a1 != b);
    CHECK(prng_expand(seed, "tag-a", 0, SampleDist::Uniform, 65537).empty());
}

TEST_CASE("uniform sampler: range and chi-square across 64 buckets") {
    const auto seed = Seed128::from_hex("00112233445566778899aabbccddeeff");
    const uint64_t q = 34359754753ull;  // 36-bit scale modulus
    SeedStream rng(seed, "uniform-test");
    const int buckets = 64;
    const int draws = 1000000;
    std::vector<uint64_t> hist(buckets, 0);
    for (int i = 0; i < draws; ++i) {
        const uint64_t v = rng.uniform_below(q);
        CHECK(v < q);
        ++hist[(size_t)((unsigned __int128)v * buckets / q)];
    }
    const double expect = (double)draws / buckets;
    double chi2 = 0;
    for (auto h : hist) chi2 += ((double)h - expect) * ((double)h - expect) / expect;
    // chi-square critical value at alpha = 0.001, df = 63
    CHECK(chi2 < 103.44);
}

TEST_CASE("ternary histogram within 3 sigma") {
    const auto seed = Seed128::from_hex("0f0e0d0c0b0a09080706050403020100");
    SeedStream rng(seed, "ternary");
    const int draws = 300000;
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) {
        const int v = rng.ternary();
        REQUIRE(v >= -1);
        REQUIRE(v <= 1);
        ++counts[v + 1];
    }
    const double expect = draws / 3.0;
    const double sigma = std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
    for (int c : counts) CHECK(std::fabs(c - expect) < 3.0 * sigma);
}

TEST_CASE("discrete gaussian: tail cut and moments") {
    const double sigma = 3.2;
    DiscreteGaussian g(sigma);
    CHECK(g.tail_bound() == 19);  // floor(6 * 3.2)
    const auto seed = Seed128::from_hex("ffeeddccbbaa99887766554433221100");
    SeedStream rng(seed, "gauss");
    const int draws = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
        const int v = g.sample(rng);
        CHECK(std::abs(v) <= 19);
        sum += v;
        sum2 += (double)v * v;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    CHECK(std::fabs(mean) < 0.05);
    CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.05));
}
