#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ckkstream/modarith.hpp"
#include "oracles.hpp"

using namespace cks;

TEST_CASE("enumeration matches the exhaustive scan oracle at (13,14,8)") {
    auto impl = enumerate_ntt_friendly_primes(13, 14, 8);
    auto scan = oracle::enumerate_primes_scan(13, 14, 8);
    std::vector<uint64_t> impl_q;
    for (const auto& p : impl) impl_q.push_back(p.q);
    CHECK(impl_q == scan);
    CHECK(!impl.empty());
    for (const auto& p : impl) {
        CHECK(p.reconstruct() == p.q);
        CHECK(p.two_adicity >= 9);
        CHECK(p.k_terms.size() <= 3);
        CHECK(p.q % (1ull << 9) == 1);
    }
}

TEST_CASE("empty range gives empty list, bad ranges throw") {
    CHECK(enumerate_ntt_friendly_primes(32, 32, 16).empty());
    CHECK_THROWS_AS(enumerate_ntt_friendly_primes(7, 14, 8), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_ntt_friendly_primes(14, 13, 8), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_ntt_friendly_primes(13, 63, 8), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_ntt_friendly_primes(13, 14, 1), std::invalid_argument);
}

TEST_CASE("montgomery context identities") {
    auto primes = enumerate_ntt_friendly_primes(13, 15, 8);
    REQUIRE(!primes.empty());
    for (const auto& p : primes) {
        auto ctx = make_montgomery_context(p);
        const uint64_t r_exp = ctx.r_exp();
        const uint64_t mask = (1ull << r_exp) - 1;
        // (q * q_inv) mod R == 1
        CHECK(((p.q * ctx.q_inv()) & mask) == 1);
        // euclid == euler == closed form
        CHECK(ctx.q_inv() == euclid_inverse_pow2(p.q, r_exp));
        CHECK(ctx.q_inv() == euler_inverse_pow2(p.q, r_exp));
        CHECK(ctx.q_inv() == closed_form_q_inv(p, r_exp));
        // plan applied to 1 gives q_inv; never more than 4 shift terms
        CHECK(ctx.shift_add(1) == ctx.q_inv());
        CHECK(ctx.shift_add_plan().size() <= 4);
        // shift-add equals the multiplication for random x < R
        std::mt19937_64 rng(p.q);
        for (int i = 0; i < 200; ++i) {
            const uint64_t x = rng() & mask;
            CHECK(ctx.shift_add(x) == ((unsigned __int128)x * ctx.q_inv() & mask));
        }
    }
}

TEST_CASE("mont_mul equals big-integer oracle") {
    auto primes = enumerate_ntt_friendly_primes(13, 15, 8);
    REQUIRE(primes.size() >= 2);
    for (const auto& p : primes) {
        auto ctx = make_montgomery_context(p);
        const uint64_t q = p.q;
        // zero absorbs, unit preserved
        CHECK(ctx.mul(0, ctx.to_mont(5)) == 0);
        CHECK(ctx.from_mont(ctx.mul(ctx.to_mont(1), ctx.to_mont(1))) == 1);
        std::mt19937_64 rng(q ^ 0xabcdef);
        for (int i = 0; i < 5000; ++i) {
            const uint64_t a = rng() % q, b = rng() % q;
            const uint64_t got = ctx.from_mont(ctx.mul(ctx.to_mont(a), ctx.to_mont(b)));
            CHECK(got == oracle::mulmod_big(a, b, q));
        }
        CHECK_THROWS_AS(ctx.mul(q, 0), std::invalid_argument);
    }
}

TEST_CASE("rns decompose / crt reconstruct roundtrip") {
    auto primes = enumerate_ntt_friendly_primes(32, 36, 16);
    REQUIRE(primes.size() >= 3);
    auto basis = make_rns_basis({primes[0], primes[7], primes[13]});

    SUBCASE("single-prime basis is the identity") {
        auto single = make_rns_basis({primes[0]});
        std::vector<BigInt> coeffs(4);
        coeffs[0] = {false, BigUint(7)};
        coeffs[1] = {true, BigUint(9)};
        coeffs[2] = {false, BigUint(0)};
        coeffs[3] = {false, BigUint(primes[0].q - 1)};  // maps to centered -1? no: q-1 < q
        auto limbs = rns_decompose(coeffs, single);
        CHECK(limbs[0][0] == 7);
        CHECK(limbs[0][1] == primes[0].q - 9);
        CHECK(limbs[0][2] == 0);
        auto back = crt_reconstruct(limbs, single);
        CHECK(back[0].to_double() == 7.0);
        CHECK(back[1].to_double() == -9.0);
        CHECK(back[2].to_double() == 0.0);
        CHECK(back[3].to_double() == -1.0);  // centered lift of q-1
    }

    SUBCASE("random 100-bit roundtrip against big-int remainders") {
        std::mt19937_64 rng(42);
        std::vector<BigInt> coeffs(64);
        for (auto& c : coeffs) {
            BigUint v(rng());
            v.mul_u64(rng() | 1);  // ~128 bits
            c.neg = rng() & 1;
            c.mag = v;
        }
        auto limbs = rns_decompose(coeffs, basis);
        for (size_t j = 0; j < basis.size(); ++j)
            for (size_t i = 0; i < coeffs.size(); ++i)
                CHECK(limbs[j][i] == coeffs[i].mod_u64(basis.primes[j].q));
        auto back = crt_reconstruct(limbs, basis);
        // the 128-bit inputs exceed Q/2 in general, so compare mod each prime
        auto limbs2 = rns_decompose(back, basis);
        CHECK(limbs2 == limbs);
    }

    SUBCASE("small centered values reconstruct exactly") {
        std::mt19937_64 rng(7);
        std::vector<BigInt> coeffs(128);
        std::vector<double> expect(coeffs.size());
        for (size_t i = 0; i < coeffs.size(); ++i) {
            const int64_t v = (int64_t)(rng() % (1ull << 40)) - (1ll << 39);
            coeffs[i].neg = v < 0;
            coeffs[i].mag = BigUint((uint64_t)(v < 0 ? -v : v));
            expect[i] = (double)v;
        }
        auto back = crt_reconstruct(rns_decompose(coeffs, basis), basis);
        for (size_t i = 0; i < coeffs.size(); ++i) CHECK(back[i].to_double() == expect[i]);
    }

    SUBCASE("all-zero in, all-zero out") {
        std::vector<BigInt> zeros(8);
        auto limbs = rns_decompose(zeros, basis);
        for (const auto& l : limbs)
            for (auto v : l) CHECK(v == 0);
        auto back = crt_reconstruct(limbs, basis);
        for (const auto& b : back) CHECK(b.to_double() == 0.0);
    }

    SUBCASE("basis mismatch throws") {
        std::vector<std::vector<uint64_t>> wrong(2, std::vector<uint64_t>(4, 0));
        CHECK_THROWS_AS(crt_reconstruct(wrong, basis), std::invalid_argument);
    }
}

TEST_CASE("36-bit enumeration supports at least 24 limbs at the default width") {
    auto primes = enumerate_ntt_friendly_primes(35, 36, 16);
    CHECK(primes.size() >= 24);
    for (const auto& p : primes) {
        CHECK(p.q >= (1ull << 35));
        CHECK(p.q < (1ull << 36));
        CHECK(p.two_adicity >= 17);
    }
}
