#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ckkstream/fourier.hpp"
#include "oracles.hpp"

using namespace cks;

namespace {

RnsBasis small_basis(size_t count, uint32_t n_log) {
    auto primes = enumerate_ntt_friendly_primes(32, 36, 16);
    REQUIRE(primes.size() >= count);
    // two-adicity 17 covers every n_log <= 16
    (void)n_log;
    std::vector<NttFriendlyPrime> picked(primes.begin(), primes.begin() + count);
    return make_rns_basis(std::move(picked));
}

RnsPolynomial random_poly(const RnsBasis& basis, uint32_t n, uint64_t seed) {
    RnsPolynomial p;
    p.degree = n;
    std::mt19937_64 rng(seed);
    for (const auto& pr : basis.primes) {
        p.prime_ids.push_back(pr.q);
        std::vector<uint64_t> limb(n);
        for (auto& v : limb) v = rng() % pr.q;
        p.limbs.push_back(std::move(limb));
    }
    return p;
}

}  // namespace

TEST_CASE("reference transform basics") {
    auto basis = small_basis(1, 4);
    const uint64_t q = basis.primes[0].q;
    NttKernel k(basis.primes[0], 4);
    const uint64_t psi = k.psi();

    SUBCASE("delta input gives all ones") {
        std::vector<uint64_t> a(16, 0);
        a[0] = 1;
        auto f = reference_transform(a, q, psi, Direction::Forward);
        for (auto v : f) CHECK(v == 1);
    }
    SUBCASE("zero maps to zero") {
        std::vector<uint64_t> a(16, 0);
        auto f = reference_transform(a, q, psi, Direction::Forward);
        for (auto v : f) CHECK(v == 0);
    }
    SUBCASE("inverse(forward) is the identity") {
        std::mt19937_64 rng(77);
        std::vector<uint64_t> a(16);
        for (auto& v : a) v = rng() % q;
        auto f = reference_transform(a, q, psi, Direction::Forward);
        auto b = reference_transform(f, q, psi, Direction::Inverse);
        CHECK(b == a);
    }
    SUBCASE("oracle size limit enforced") {
        std::vector<uint64_t> big(1u << 13, 0);
        CHECK_THROWS_AS(reference_transform(big, q, psi, Direction::Forward),
                        std::invalid_argument);
    }
}

TEST_CASE("merged NTT equals the N^2 oracle and roundtrips") {
    for (uint32_t log_n : {4u, 6u, 8u, 10u}) {
        const uint32_t n = 1u << log_n;
        auto basis = small_basis(3, log_n);
        auto fctx = make_fourier_context(basis, log_n);
        auto poly = random_poly(basis, n, 1000 + log_n);

        RnsPolynomial work = poly;
        negacyclic_ntt(work, fctx, Direction::Forward);
        CHECK(work.domain == PolyDomain::Ntt);
        CHECK(work.ordering == PolyOrdering::Natural);
        for (size_t j = 0; j < basis.size(); ++j) {
            auto expect = reference_transform(poly.limbs[j], basis.primes[j].q,
                                              fctx.kernels[j].psi(), Direction::Forward);
            CHECK(work.limbs[j] == expect);
        }
        negacyclic_ntt(work, fctx, Direction::Inverse);
        CHECK(work.domain == PolyDomain::Coefficient);
        CHECK(work.limbs == poly.limbs);
    }
}

TEST_CASE("transform flags are enforced") {
    auto basis = small_basis(1, 4);
    auto fctx = make_fourier_context(basis, 4);
    auto poly = random_poly(basis, 16, 5);
    CHECK_THROWS_AS(negacyclic_ntt(poly, fctx, Direction::Inverse), std::invalid_argument);
    negacyclic_ntt(poly, fctx, Direction::Forward);
    CHECK_THROWS_AS(negacyclic_ntt(poly, fctx, Direction::Forward), std::invalid_argument);
}

TEST_CASE("linearity of the forward transform") {
    const uint32_t log_n = 6, n = 1u << log_n;
    auto basis = small_basis(2, log_n);
    auto fctx = make_fourier_context(basis, log_n);
    auto a = random_poly(basis, n, 11);
    auto b = random_poly(basis, n, 12);
    const uint64_t alpha = 12345;

    RnsPolynomial combo = a;
    for (size_t j = 0; j < basis.size(); ++j) {
        const uint64_t q = basis.primes[j].q;
        for (uint32_t i = 0; i < n; ++i)
            combo.limbs[j][i] = add_mod(mul_mod(alpha % q, a.limbs[j][i], q), b.limbs[j][i], q);
    }
    RnsPolynomial fa = a, fb = b;
    negacyclic_ntt(fa, fctx, Direction::Forward);
    negacyclic_ntt(fb, fctx, Direction::Forward);
    negacyclic_ntt(combo, fctx, Direction::Forward);
    for (size_t j = 0; j < basis.size(); ++j) {
        const uint64_t q = basis.primes[j].q;
        for (uint32_t i = 0; i < n; ++i) {
            const uint64_t expect =
                add_mod(mul_mod(alpha % q, fa.limbs[j][i], q), fb.limbs[j][i], q);
            CHECK(combo.limbs[j][i] == expect);
        }
    }
}

TEST_CASE("negacyclic product matches schoolbook") {
    const uint32_t log_n = 6, n = 1u << log_n;
    auto basis = small_basis(2, log_n);
    auto fctx = make_fourier_context(basis, log_n);
    auto a = random_poly(basis, n, 21);
    auto b = random_poly(basis, n, 22);
    auto prod = negacyclic_polymul(a, b, fctx);
    for (size_t j = 0; j < basis.size(); ++j) {
        auto expect = oracle::schoolbook_negacyclic(a.limbs[j], b.limbs[j], basis.primes[j].q);
        CHECK(prod.limbs[j] == expect);
    }

    SUBCASE("multiplication by one is the identity") {
        RnsPolynomial one = a;
        for (size_t j = 0; j < basis.size(); ++j) {
            std::fill(one.limbs[j].begin(), one.limbs[j].end(), 0);
            one.limbs[j][0] = 1;
        }
        auto same = negacyclic_polymul(a, one, fctx);
        CHECK(same.limbs == a.limbs);
    }
    SUBCASE("x^(N-1) * x = -1") {
        RnsPolynomial xn1 = a, x1 = a;
        for (size_t j = 0; j < basis.size(); ++j) {
            std::fill(xn1.limbs[j].begin(), xn1.limbs[j].end(), 0);
            std::fill(x1.limbs[j].begin(), x1.limbs[j].end(), 0);
            xn1.limbs[j][n - 1] = 1;
            x1.limbs[j][1] = 1;
        }
        auto neg_one = negacyclic_polymul(xn1, x1, fctx);
        for (size_t j = 0; j < basis.size(); ++j) {
            CHECK(neg_one.limbs[j][0] == basis.primes[j].q - 1);
            for (uint32_t i = 1; i < n; ++i) CHECK(neg_one.limbs[j][i] == 0);
        }
    }
}

TEST_CASE("dataflow schedule: streaming equals batch, FIFOs double") {
    auto basis = small_basis(1, 10);
    for (uint32_t log_n : {2u, 3u, 5u, 8u, 10u}) {
        const uint32_t n = 1u << log_n;
        NttKernel kernel(basis.primes[0], log_n);
        const uint64_t q = kernel.q();
        for (uint32_t lanes : {2u, 4u, 8u, 16u}) {
            if (lanes > n) continue;
            // radix-2 plan
            std::vector<uint32_t> plan(log_n, 1);
            auto sched = build_dataflow_schedule(lanes, n, plan);

            std::mt19937_64 rng(log_n * 100 + lanes);
            std::vector<uint64_t> input(n);
            for (auto& v : input) v = rng() % q;

            StreamRunStats stats;
            auto streamed = stream_transform(sched, kernel, input, Direction::Forward, &stats);
            auto batch = reference_transform(input, q, kernel.psi(), Direction::Forward);
            CHECK(streamed == batch);

            // declared == observed FIFO occupancy, and doubling over buffered levels
            uint64_t prev = 0;
            for (uint32_t level = 0; level < log_n; ++level) {
                CHECK(stats.level_fifo_high_water[level] == sched.level_fifo_words[level]);
                if (sched.level_fifo_words[level] > 0) {
                    if (prev > 0) CHECK(sched.level_fifo_words[level] == 2 * prev);
                    prev = sched.level_fifo_words[level];
                }
            }

            // inverse direction streams too
            auto inv = stream_transform(sched, kernel, streamed, Direction::Inverse);
            CHECK(inv == input);
        }
    }
}

TEST_CASE("streaming works for grouped radix plans") {
    auto basis = small_basis(1, 8);
    const uint32_t log_n = 8, n = 1u << log_n;
    NttKernel kernel(basis.primes[0], log_n);
    std::mt19937_64 rng(99);
    std::vector<uint64_t> input(n);
    for (auto& v : input) v = rng() % kernel.q();
    auto batch = reference_transform(input, kernel.q(), kernel.psi(), Direction::Forward);
    for (auto plan : std::vector<std::vector<uint32_t>>{{2, 2, 2, 2}, {4, 4}, {3, 3, 2}, {1, 3, 4}}) {
        auto sched = build_dataflow_schedule(4, n, plan);
        auto streamed = stream_transform(sched, kernel, input, Direction::Forward);
        CHECK(streamed == batch);
    }
}

TEST_CASE("schedule validation") {
    const std::vector<uint32_t> full{1, 1, 1, 1}, shrt{1, 1, 1}, over{2, 3}, pair{1, 1};
    CHECK_THROWS_AS(build_dataflow_schedule(3, 16, full), std::invalid_argument);
    CHECK_THROWS_AS(build_dataflow_schedule(2, 16, shrt), std::invalid_argument);
    CHECK_THROWS_AS(build_dataflow_schedule(2, 16, over), std::invalid_argument);
    auto sched = build_dataflow_schedule(2, 4, pair);
    CHECK(sched.stage_count() == 2);
}

TEST_CASE("N == P transform needs no inter-stage FIFO words") {
    auto basis = small_basis(1, 4);
    NttKernel kernel(basis.primes[0], 4);
    auto sched = build_dataflow_schedule(16, 16, {1, 1, 1, 1});
    for (auto w : sched.level_fifo_words) CHECK(w == 0);
    std::mt19937_64 rng(3);
    std::vector<uint64_t> input(16);
    for (auto& v : input) v = rng() % kernel.q();
    auto streamed = stream_transform(sched, kernel, input, Direction::Forward);
    CHECK(streamed == reference_transform(input, kernel.q(), kernel.psi(), Direction::Forward));
}

TEST_CASE("merged-schedule admissibility is the uniform-radix pattern") {
    auto u1 = build_dataflow_schedule(2, 16, {1, 1, 1, 1});
    auto u2 = build_dataflow_schedule(2, 16, {2, 2});
    auto u4 = build_dataflow_schedule(2, 16, {4});
    auto mixed = build_dataflow_schedule(2, 16, {1, 3});
    CHECK(merged_schedule_admissible(u1));
    CHECK(merged_schedule_admissible(u2));
    CHECK(merged_schedule_admissible(u4));
    CHECK(!merged_schedule_admissible(mixed));
}

TEST_CASE("OTF twiddle stream") {
    auto basis = small_basis(1, 3);
    const uint32_t log_n = 3, n = 8;
    NttKernel kernel(basis.primes[0], log_n);
    auto sched = build_dataflow_schedule(2, n, {1, 1, 1});

    SUBCASE("stage streams cover the twiddle table exactly") {
        // distinct values per level m are psi^((N/2m)(1+2j)); all levels together
        // cover the full bit-reversed table entries 1..N-1
        std::vector<uint64_t> seen;
        for (uint32_t st = 0; st < sched.stage_count(); ++st) {
            OtfTwiddleStream s(kernel.seeds(), sched, st, Direction::Forward, kernel.ctx());
            std::vector<uint64_t> level_vals;
            uint64_t v;
            while (s.next(&v)) level_vals.push_back(v);
            CHECK(level_vals.size() == n / 2);
            // distinct values of this stage
            std::vector<uint64_t> distinct = level_vals;
            std::sort(distinct.begin(), distinct.end());
            distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
            CHECK(distinct.size() == (1u << st));
            for (auto d : distinct) seen.push_back(d);
        }
        std::vector<uint64_t> table;
        for (uint32_t i = 1; i < n; ++i) table.push_back(kernel.table_twiddle(i));
        std::sort(table.begin(), table.end());
        std::sort(seen.begin(), seen.end());
        CHECK(seen == table);
    }

    SUBCASE("first stage is the constant psi^(N/2) column") {
        OtfTwiddleStream s(kernel.seeds(), sched, 0, Direction::Forward, kernel.ctx());
        uint64_t v;
        const uint64_t expect = kernel.table_twiddle(1);  // psi^brv(1) = psi^(N/2)
        while (s.next(&v)) CHECK(v == expect);
    }

    SUBCASE("step 1 means a constant stream") {
        // level 0 seed has period 1, so the generator resets every emission
        const auto& seed = kernel.seeds().forward[0];
        CHECK(seed.period == 1);
    }
}

TEST_CASE("schedule text dump names stages, radices, FIFO words and seeds") {
    auto basis = small_basis(1, 4);
    NttKernel kernel(basis.primes[0], 4);
    auto sched = build_dataflow_schedule(2, 16, {2, 2});
    const auto text = schedule_to_text(sched, kernel.seeds());
    CHECK(text.find("stage 0 radix=2^2") != std::string::npos);
    CHECK(text.find("fifo_words=") != std::string::npos);
    CHECK(text.find("base=") != std::string::npos);
    CHECK(text.find("period=") != std::string::npos);
}

TEST_CASE("OTF stream state stays a couple of machine words") {
    // one mutable field element (the running factor) plus the per-level seed
    // registers and counters; nothing scales with N
    CHECK(sizeof(OtfTwiddleStream) <= 96);
    auto basis = small_basis(1, 10);
    NttKernel kernel(basis.primes[0], 10);
    auto sched = build_dataflow_schedule(2, 1024, std::vector<uint32_t>(10, 1));
    OtfTwiddleStream s(kernel.seeds(), sched, 9, Direction::Forward, kernel.ctx());
    uint64_t v = 0, count = 0;
    while (s.next(&v)) ++count;
    CHECK(count == 512);
}

TEST_CASE("twiddle multiplication counts: 8-point figures") {
    auto basis = small_basis(1, 3);
    NttKernel kernel(basis.primes[0], 3);
    CHECK(count_transform_twiddle_mults(kernel, {1, 1, 1}, true) == 13);
    CHECK(count_transform_twiddle_mults(kernel, {3}, true) == 12);
    CHECK(count_transform_twiddle_mults(kernel, {1, 1, 1}, false) == 13);
}
