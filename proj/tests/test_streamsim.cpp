#include <doctest.h>

#include <cmath>
#include <deque>
#include <stdexcept>

#include "ckkstream/streamsim.hpp"

using namespace cks;

namespace {

SimConfig default_cfg() {
    SimConfig cfg;
    cfg.params.log_n = 16;
    cfg.params.levels = 24;
    return cfg;
}

// event-driven pass model: words flow through log2(N) levels, each adding
// its commutator delay (for buffered strides) plus the multiplier latency
uint64_t event_sim_pass_cycles(uint32_t n, uint32_t lanes, uint32_t mult_latency) {
    const uint32_t words = n / lanes;
    uint32_t log_n = 0;
    while ((1u << log_n) < n) ++log_n;
    std::deque<uint64_t> times(words);
    for (uint32_t t = 0; t < words; ++t) times[t] = t;  // arrival cycle of each word
    for (uint32_t level = 0; level < log_n; ++level) {
        const uint64_t stride = 1ull << level;
        const uint64_t delay = stride >= lanes ? stride / lanes : 0;
        for (uint32_t t = 0; t < words; ++t) times[t] += delay + mult_latency + 1;
    }
    return times.back() + 1;  // completion cycle of the final word
}

}  // namespace

TEST_CASE("pass cycles match the event model exactly") {
    for (uint32_t log_n : {8u, 10u, 12u, 16u}) {
        for (uint32_t lanes : {2u, 4u, 8u, 16u}) {
            SimConfig cfg = default_cfg();
            cfg.params.log_n = log_n;
            cfg.lanes_per_pnl = lanes;
            const uint64_t got = pnl_pass_cycles(cfg);
            const uint64_t expect = event_sim_pass_cycles(cfg.params.n(), lanes, cfg.mult_latency);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("empty workload simulates to zero") {
    const auto rep = simulate(default_cfg(), {0, 0});
    CHECK(rep.total_cycles == 0);
    CHECK(rep.ema_bytes_in == 0);
    CHECK(rep.throughput_ct_per_sec == 0.0);
}

TEST_CASE("determinism and basic conservation laws") {
    SimConfig cfg = default_cfg();
    const WorkloadSpec wl{8, 0};
    const auto a = simulate(cfg, wl);
    const auto b = simulate(cfg, wl);
    CHECK(a.total_cycles == b.total_cycles);
    CHECK(a.ema_bytes_in == b.ema_bytes_in);

    // bandwidth conservation
    const double bytes = (double)(a.ema_bytes_in + a.ema_bytes_out);
    CHECK(bytes / a.wall_seconds <= cfg.dram_bytes_per_sec * (1.0 + 1e-9));

    // work conservation: coefficient-ops never exceed lane-cycles
    const uint64_t coeff_ops = 8ull * (3 * cfg.params.levels + 1) * cfg.params.n();
    const uint64_t lane_cycles = a.total_cycles * cfg.lanes_per_pnl * cfg.pnl_per_rsc *
                                 cfg.rsc_count;
    CHECK(coeff_ops <= lane_cycles);
}

TEST_CASE("latency monotone in bandwidth and lanes; EMA monotone in flags") {
    SimConfig cfg = default_cfg();
    const WorkloadSpec wl{4, 0};
    const auto base = simulate(cfg, wl);

    SimConfig more_bw = cfg;
    more_bw.dram_bytes_per_sec *= 2.0;
    CHECK(simulate(more_bw, wl).total_cycles <= base.total_cycles);

    SimConfig more_lanes = cfg;
    more_lanes.lanes_per_pnl = 16;
    CHECK(simulate(more_lanes, wl).total_cycles <= base.total_cycles);

    SimConfig no_otf = cfg;
    no_otf.onchip = {false, false};
    const auto heavy = simulate(no_otf, wl);
    CHECK(heavy.ema_bytes_in >= base.ema_bytes_in);
    SimConfig tf_only = cfg;
    tf_only.onchip = {true, false};
    const auto mid = simulate(tf_only, wl);
    CHECK(mid.ema_bytes_in >= base.ema_bytes_in);
    CHECK(mid.ema_bytes_in <= heavy.ema_bytes_in);
}

TEST_CASE("dual-encrypt throughput doubles the single core when compute-bound") {
    SimConfig cfg = default_cfg();
    cfg.dram_bytes_per_sec = 1e15;  // effectively infinite channel
    WorkloadSpec dual{2 * 6, 0};
    const auto two_core = simulate(cfg, dual);
    SimConfig single = cfg;
    single.rsc_count = 1;
    const auto one_core = simulate(single, {6, 0});
    CHECK(two_core.throughput_ct_per_sec ==
          doctest::Approx(2.0 * one_core.throughput_ct_per_sec).epsilon(0.02));
}

TEST_CASE("mixed mode runs both directions concurrently with a ~10x path gap") {
    SimConfig cfg = default_cfg();
    cfg.mode = SimMode::Mixed;
    const auto rep = simulate(cfg, {1, 1});
    const uint64_t enc_path = rep.ifft_cycles + rep.ntt_cycles;
    const uint64_t dec_path = rep.intt_cycles + rep.fft_cycles;
    CHECK(enc_path >= dec_path);
    const double ratio = (double)enc_path / (double)dec_path;
    CHECK(ratio >= 7.0);
    CHECK(ratio <= 13.0);
    // concurrent cores: faster than serializing both paths on one core
    SimConfig serial = cfg;
    serial.mode = SimMode::DualEncrypt;
    serial.rsc_count = 1;
    const auto enc_only = simulate(serial, {1, 0});
    serial.mode = SimMode::DualDecrypt;
    const auto dec_only = simulate(serial, {0, 1});
    CHECK(rep.total_cycles < enc_only.total_cycles + dec_only.total_cycles);
}

TEST_CASE("mode constraints enforced") {
    SimConfig cfg = default_cfg();
    CHECK_THROWS_AS(simulate(cfg, {1, 1}), std::invalid_argument);
    cfg.mode = SimMode::DualDecrypt;
    CHECK_THROWS_AS(simulate(cfg, {1, 0}), std::invalid_argument);
    CHECK_NOTHROW(simulate(cfg, {0, 3}));
}

TEST_CASE("scratchpad feasibility is checked and named") {
    SimConfig cfg = default_cfg();
    cfg.word_bits_int = 64;  // 2 * 512 KiB double-buffered tile > 880 KB
    try {
        simulate(cfg, {1, 0});
        FAIL("expected a configuration error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("scratchpad") != std::string::npos);
    }
}

TEST_CASE("lane sweep: knee at 8 under the default channel, 4 at half bandwidth") {
    SimConfig cfg = default_cfg();
    const std::vector<uint32_t> lanes{2, 4, 8, 16};
    const auto sweep = lane_sweep(cfg, lanes);
    REQUIRE(sweep.rows.size() == 4);
    CHECK(sweep.knee_lanes == 8);
    CHECK(analytic_knee(cfg, lanes) == 8);

    const double t4 = sweep.rows[1].throughput_ct_per_sec;
    const double t8 = sweep.rows[2].throughput_ct_per_sec;
    const double t16 = sweep.rows[3].throughput_ct_per_sec;
    CHECK(t16 / t8 < 1.1);
    CHECK(t8 / t4 > 1.5);

    SimConfig half = cfg;
    half.dram_bytes_per_sec /= 2.0;
    CHECK(lane_sweep(half, lanes).knee_lanes == 4);
    CHECK(analytic_knee(half, lanes) == 4);
}

TEST_CASE("infinite bandwidth makes throughput scale with lanes") {
    SimConfig cfg = default_cfg();
    cfg.dram_bytes_per_sec = 1e18;
    const auto sweep = lane_sweep(cfg, {2, 4, 8, 16});
    for (size_t i = 1; i < sweep.rows.size(); ++i) {
        const double gain =
            sweep.rows[i].throughput_ct_per_sec / sweep.rows[i - 1].throughput_ct_per_sec;
        CHECK(gain == doctest::Approx(2.0).epsilon(0.01));
    }
}

TEST_CASE("ema ablation") {
    SimConfig cfg = default_cfg();
    const WorkloadSpec wl{1, 0};

    SUBCASE("All versus All is unity") {
        SimConfig all = cfg;
        all.onchip = {true, true};
        const auto rep = simulate(all, wl);
        CHECK((double)rep.total_cycles / (double)rep.total_cycles == 1.0);
    }

    SUBCASE("Base EMA bytes cross-check the memory accountant exactly") {
        SimConfig base = cfg;
        base.onchip = {false, false};
        base.twiddle_fetch = TwiddleFetch::PerLimb;
        base.dram_burst_bytes = 1;  // byte-exact for the accounting identity
        const auto mcost = message_costs(base);
        const auto acct = memory_accountant(base.params, base.word_bits_int, {});
        const uint64_t msg_bytes = (uint64_t)base.params.n() * 8;
        CHECK(mcost.enc_bytes_in == msg_bytes + acct.public_key_bytes +
                                        acct.masks_errors_bytes + acct.twiddles_bytes);
    }

    SUBCASE("Base over All latency ratio for N in 2^14..2^16") {
        for (uint32_t log_n : {14u, 15u, 16u}) {
            SimConfig c = cfg;
            c.params.log_n = log_n;
            const auto result = ema_ablation(c, wl);
            REQUIRE(result.rows.size() == 3);
            CHECK(result.base_over_all >= 6.5);
            CHECK(result.base_over_all <= 11.0);
            CHECK(result.rows[0].ema_bytes > result.rows[1].ema_bytes);
            CHECK(result.rows[1].ema_bytes > result.rows[2].ema_bytes);
        }
    }
}

TEST_CASE("fifo report: declared equals observed, doubling holds") {
    SimConfig cfg = default_cfg();
    cfg.params.log_n = 10;  // keep the probe small
    const auto rep = fifo_report(cfg);
    REQUIRE(rep.stages.size() == 10);
    CHECK(rep.doubling_holds);
    for (const auto& st : rep.stages) CHECK(st.declared_words == st.observed_words);

    SUBCASE("N == P has no inter-stage FIFO words") {
        SimConfig tiny = cfg;
        tiny.params.log_n = 4;
        tiny.lanes_per_pnl = 16;
        const auto r = fifo_report(tiny);
        for (const auto& st : r.stages) CHECK(st.declared_words == 0);
    }
}

TEST_CASE("encrypt compute is an exact closed form") {
    SimConfig cfg = default_cfg();
    const auto mc = message_costs(cfg);
    // N/P words per pass, 18 pass rounds over 4 PNLs, plus the ganged IFFT
    CHECK(mc.enc_ntt_cycles == 18u * 8192);
    CHECK(mc.enc_ifft_cycles == 8192);
    CHECK(mc.enc_compute_steady == 155648);
    CHECK(pnl_pass_cycles(cfg) == 8192 + pnl_pipeline_depth(cfg));
}
