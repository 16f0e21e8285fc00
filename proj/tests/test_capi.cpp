// Exercises the shared-library C API surface end to end.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "ckkstream.h"

namespace {

const char* kSeed = "000102030405060708090a0b0c0d0e0f";

cks_params small_params() {
    cks_params p;
    cks_params_default(&p);
    p.log_n = 10;
    p.levels = 4;
    return p;
}

}  // namespace

TEST_CASE("version and status strings") {
    CHECK(std::string(cks_version()).find("ckkstream") != std::string::npos);
    CHECK(std::string(cks_status_name(CKS_OK)) == "ok");
    CHECK(std::string(cks_status_name(CKS_ERR_INVALID)) == "invalid argument");
}

TEST_CASE("prime enumeration through the C surface") {
    cks_prime_list* list = nullptr;
    REQUIRE(cks_primes_enumerate(13, 14, 8, &list) == CKS_OK);
    const size_t count = cks_prime_list_size(list);
    CHECK(count > 0);
    for (size_t i = 0; i < count; ++i) {
        cks_prime_info info;
        REQUIRE(cks_prime_list_get(list, i, &info) == CKS_OK);
        CHECK(info.q % (1u << 9) == 1);
        CHECK(info.term_count <= 3);
        // reconstruct q from the witness
        long long k = 0;
        for (int t = 0; t < info.term_count; ++t)
            k += (long long)info.sign[t] * (1ll << info.exp[t]);
        CHECK((long long)info.q == (1ll << info.p_bw) + k * (1ll << (info.n + 1)) + 1);
    }
    cks_prime_info info;
    CHECK(cks_prime_list_get(list, count, &info) == CKS_ERR_INVALID);
    CHECK(std::string(cks_last_error()).size() > 0);
    cks_prime_list_free(list);

    CHECK(cks_primes_enumerate(7, 14, 8, &list) == CKS_ERR_INVALID);
}

TEST_CASE("client pipeline: encode/encrypt/decrypt/decode with handles") {
    const cks_params params = small_params();
    cks_context* ctx = nullptr;
    REQUIRE(cks_context_create(&params, &ctx) == CKS_OK);
    const size_t slots = cks_context_slot_count(ctx);
    CHECK(slots == 512);

    std::vector<double> re(slots), im(slots);
    for (size_t i = 0; i < slots; ++i) {
        re[i] = 0.5 * std::cos(0.01 * (double)i);
        im[i] = 0.5 * std::sin(0.013 * (double)i);
    }

    cks_keys* keys = nullptr;
    REQUIRE(cks_keygen(ctx, kSeed, &keys) == CKS_OK);
    cks_plaintext* pt = nullptr;
    REQUIRE(cks_encode(ctx, re.data(), im.data(), slots, 52, &pt) == CKS_OK);
    CHECK(cks_plaintext_level(pt) == 4);
    cks_ciphertext* ct = nullptr;
    REQUIRE(cks_encrypt(ctx, keys, pt, kSeed, &ct) == CKS_OK);
    cks_plaintext* dec = nullptr;
    REQUIRE(cks_decrypt(ctx, keys, ct, &dec) == CKS_OK);
    std::vector<double> out_re(slots), out_im(slots);
    REQUIRE(cks_decode(ctx, dec, 52, out_re.data(), out_im.data(), slots) == CKS_OK);
    double worst = 0;
    for (size_t i = 0; i < slots; ++i)
        worst = std::max(worst, std::hypot(out_re[i] - re[i], out_im[i] - im[i]));
    CHECK(worst < 1e-4);

    SUBCASE("determinism: identical seeds give identical ciphertext files") {
        cks_ciphertext* ct2 = nullptr;
        REQUIRE(cks_encrypt(ctx, keys, pt, kSeed, &ct2) == CKS_OK);
        REQUIRE(cks_ciphertext_save(ct, "/tmp/cks-capi-a.bin") == CKS_OK);
        REQUIRE(cks_ciphertext_save(ct2, "/tmp/cks-capi-b.bin") == CKS_OK);
        std::ifstream fa("/tmp/cks-capi-a.bin", std::ios::binary);
        std::ifstream fb("/tmp/cks-capi-b.bin", std::ios::binary);
        std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        CHECK(sa == sb);
        cks_ciphertext_free(ct2);
    }

    SUBCASE("save/load roundtrip") {
        REQUIRE(cks_keys_save(keys, "/tmp/cks-capi-keys.bin") == CKS_OK);
        cks_keys* loaded = nullptr;
        REQUIRE(cks_keys_load("/tmp/cks-capi-keys.bin", &loaded) == CKS_OK);
        cks_plaintext* dec2 = nullptr;
        REQUIRE(cks_decrypt(ctx, loaded, ct, &dec2) == CKS_OK);
        cks_plaintext_free(dec2);
        cks_keys_free(loaded);
        CHECK(cks_keys_load("/tmp/definitely-missing-file.bin", &loaded) == CKS_ERR_IO);
    }

    SUBCASE("bad seed and bad sizes are rejected") {
        cks_keys* bad = nullptr;
        CHECK(cks_keygen(ctx, "xyz", &bad) == CKS_ERR_INVALID);
        std::vector<double> big(2 * slots, 2.0);
        cks_plaintext* p2 = nullptr;
        CHECK(cks_encode(ctx, big.data(), nullptr, slots, 52, &p2) == CKS_ERR_RANGE);
        CHECK(cks_encode(ctx, re.data(), im.data(), 3, 52, &p2) == CKS_ERR_INVALID);
    }

    cks_plaintext_free(dec);
    cks_ciphertext_free(ct);
    cks_plaintext_free(pt);
    cks_keys_free(keys);
    cks_context_free(ctx);
}

TEST_CASE("accountant, explorer and simulator through the C surface") {
    cks_params params;
    cks_params_default(&params);
    cks_memory_report rep;
    REQUIRE(cks_account_memory(&params, 44, 0, 0, &rep) == CKS_OK);
    CHECK(rep.public_key_bytes == 17301504);

    uint64_t modmul = 0, fpmul = 0, shared = 0, tmt = 0;
    REQUIRE(cks_count_multipliers(8, 16, "16x16x16x16", 1, &modmul, &fpmul, &shared, &tmt) ==
            CKS_OK);
    CHECK(modmul == 64);
    CHECK(cks_count_multipliers(8, 4, "2x8", 1, &modmul, &fpmul, &shared, &tmt) ==
          CKS_ERR_INVALID);

    cks_sim_config cfg;
    cks_sim_config_default(&cfg);
    cks_workload wl{2, 0};
    cks_sim_report sim;
    REQUIRE(cks_simulate(&cfg, &wl, &sim) == CKS_OK);
    CHECK(sim.total_cycles > 0);
    CHECK(sim.throughput_ct_per_sec > 0);

    const uint32_t lanes[4] = {2, 4, 8, 16};
    cks_lane_sweep_row* rows = nullptr;
    size_t count = 0;
    uint32_t knee = 0;
    REQUIRE(cks_lane_sweep(&cfg, lanes, 4, &rows, &count, &knee) == CKS_OK);
    CHECK(count == 4);
    CHECK(knee == 8);
    cks_lane_sweep_rows_free(rows);

    cks_ema_row ema[3];
    double ratio = 0;
    REQUIRE(cks_ema_ablation(&cfg, &wl, ema, &ratio) == CKS_OK);
    CHECK(ratio > 1.0);
    CHECK(std::string(ema[0].variant) == "base");

    cks_fifo_row* fifo = nullptr;
    int doubling = 0;
    cfg.params.log_n = 10;
    REQUIRE(cks_fifo_report(&cfg, &fifo, &count, &doubling) == CKS_OK);
    CHECK(doubling == 1);
    cks_fifo_rows_free(fifo);
}

TEST_CASE("selftest is green at small sizes") {
    CHECK(cks_selftest(8) == CKS_OK);
    CHECK(cks_selftest(2) == CKS_ERR_INVALID);
}
