#include "ckkstream/streamsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cks {

namespace {

uint64_t ceil_div_u64(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

uint64_t burst_quantize(uint64_t bytes, uint32_t burst) {
    if (bytes == 0 || burst == 0) return bytes;
    return ceil_div_u64(bytes, burst) * burst;
}

uint64_t bits_to_bytes(uint64_t bits) { return (bits + 7) / 8; }

struct Widths {
    uint32_t log_n;
    uint64_t n;
    uint32_t lanes;          // P
    uint32_t complex_lanes;  // ganged FFT width across the RSC's PNLs
};

Widths widths_of(const SimConfig& cfg) {
    Widths w;
    w.log_n = cfg.params.log_n;
    w.n = cfg.params.n();
    w.lanes = cfg.lanes_per_pnl;
    w.complex_lanes = std::max<uint32_t>(cfg.pnl_per_rsc * cfg.lanes_per_pnl / 4, 1);
    return w;
}

void validate(const SimConfig& cfg) {
    if (cfg.clock_hz <= 0 || cfg.dram_bytes_per_sec <= 0)
        throw std::invalid_argument("clock and bandwidth must be positive");
    if ((cfg.lanes_per_pnl & (cfg.lanes_per_pnl - 1)) != 0 || cfg.lanes_per_pnl < 2)
        throw std::invalid_argument("lanes_per_pnl must be a power of two >= 2");
    if (cfg.pnl_per_rsc == 0 || cfg.rsc_count == 0)
        throw std::invalid_argument("pnl_per_rsc and rsc_count must be positive");
    if (cfg.params.levels == 0) throw std::invalid_argument("levels must be positive");
    if (cfg.decrypt_level == 0 || cfg.decrypt_level > cfg.params.levels)
        throw std::invalid_argument("decrypt_level out of range");
    // double-buffered tiling feasibility
    const uint64_t limb_tile = bits_to_bytes((uint64_t)cfg.params.n() * cfg.word_bits_int);
    const uint64_t msg_half = (uint64_t)cfg.params.n() * 16 / 4;  // half the f64 slot vector
    const uint64_t required = 2 * std::max(limb_tile, msg_half);
    if (required > cfg.global_scratch_bytes)
        throw std::runtime_error(
            "global scratchpad cannot hold a double-buffered limb tile at this configuration");
}

// twiddle stream bytes one pass fetches when there is no on-chip generator:
// stages whose period fits the per-stage registers load their period table
// once; larger stages re-stream a factor per butterfly
uint64_t twiddle_stream_values(const Widths& w, uint32_t buffer_words) {
    uint64_t values = 0;
    for (uint32_t level = 0; level < w.log_n; ++level) {
        const uint64_t period = 1ull << level;
        values += period <= buffer_words ? period : w.n / 2;
    }
    return values;
}

}  // namespace

double dram_bytes_per_cycle(const SimConfig& cfg) {
    return cfg.dram_bytes_per_sec / cfg.clock_hz;
}

uint64_t pnl_pipeline_depth(const SimConfig& cfg) {
    const Widths w = widths_of(cfg);
    uint64_t depth = 0;
    for (uint32_t level = 0; level < w.log_n; ++level) {
        const uint64_t stride = 1ull << level;
        depth += (stride >= w.lanes ? stride / w.lanes : 0) + cfg.mult_latency + 1;
    }
    return depth;
}

uint64_t pnl_pass_cycles(const SimConfig& cfg) {
    const Widths w = widths_of(cfg);
    return w.n / w.lanes + pnl_pipeline_depth(cfg);
}

MessageCosts message_costs(const SimConfig& cfg) {
    const Widths w = widths_of(cfg);
    const uint64_t L = cfg.params.levels;
    const uint64_t dl = cfg.decrypt_level;
    const uint64_t int_words = w.n / w.lanes;
    const uint64_t fp_words = w.n / w.complex_lanes;
    const uint64_t cbi = cfg.word_bits_int;

    MessageCosts mc;
    // encrypt: one ganged IFFT, then three integer passes per limb
    // (mask v, fused error+message, second error), spread over the PNLs
    const uint64_t enc_passes = 3 * L;
    mc.enc_ifft_cycles = fp_words;
    mc.enc_ntt_cycles = ceil_div_u64(enc_passes, cfg.pnl_per_rsc) * int_words;
    mc.enc_compute_steady = mc.enc_ifft_cycles + mc.enc_ntt_cycles;
    mc.enc_mse_cycles = 2 * L * int_words;  // round/RNS and the pointwise fuse, overlapped

    // decrypt: pointwise MSE (overlapped), per-limb INTT, CRT, ganged FFT
    mc.dec_intt_cycles = ceil_div_u64(dl, cfg.pnl_per_rsc) * int_words;
    mc.dec_fft_cycles = fp_words;
    mc.dec_compute_steady = mc.dec_intt_cycles + mc.dec_fft_cycles;
    mc.dec_mse_cycles = (dl + 1) * int_words;

    uint64_t fp_depth = 0;
    for (uint32_t level = 0; level < w.log_n; ++level) {
        const uint64_t stride = 1ull << level;
        fp_depth += (stride >= w.complex_lanes ? stride / w.complex_lanes : 0) +
                    cfg.mult_latency + 1;
    }
    mc.enc_fill = pnl_pipeline_depth(cfg) + fp_depth;
    mc.dec_fill = mc.enc_fill;

    // external memory traffic
    const uint64_t poly_bytes = bits_to_bytes((uint64_t)L * w.n * cbi);
    const uint64_t msg_bytes = (uint64_t)w.n * 8;  // N/2 complex f64 pairs
    const uint32_t burst = cfg.dram_burst_bytes;

    mc.enc_bytes_in = burst_quantize(msg_bytes, burst);
    if (!cfg.onchip.randoms) {
        mc.enc_bytes_in += burst_quantize(2 * poly_bytes, burst);  // public key
        mc.enc_bytes_in += burst_quantize(poly_bytes, burst);      // masks and errors
    }
    if (!cfg.onchip.twiddles) {
        if (cfg.twiddle_fetch == TwiddleFetch::PerLimb) {
            mc.enc_bytes_in += burst_quantize(poly_bytes, burst);
        } else {
            const uint64_t per_pass =
                burst_quantize(bits_to_bytes(twiddle_stream_values(w, cfg.twiddle_buffer_words) * cbi),
                               burst);
            mc.enc_bytes_in += enc_passes * per_pass;
        }
    }
    mc.enc_bytes_out = burst_quantize(2 * bits_to_bytes((uint64_t)L * w.n * cbi), burst);

    const uint64_t dec_poly_bytes = bits_to_bytes((uint64_t)dl * w.n * cbi);
    mc.dec_bytes_in = burst_quantize(2 * dec_poly_bytes, burst);  // ciphertext
    if (!cfg.onchip.randoms)
        mc.dec_bytes_in += burst_quantize(dec_poly_bytes, burst);  // secret key limbs
    if (!cfg.onchip.twiddles) {
        if (cfg.twiddle_fetch == TwiddleFetch::PerLimb) {
            mc.dec_bytes_in += burst_quantize(dec_poly_bytes, burst);
        } else {
            const uint64_t per_pass =
                burst_quantize(bits_to_bytes(twiddle_stream_values(w, cfg.twiddle_buffer_words) * cbi),
                               burst);
            mc.dec_bytes_in += dl * per_pass;
        }
    }
    mc.dec_bytes_out = burst_quantize(msg_bytes, burst);
    return mc;
}

SimReport simulate(const SimConfig& cfg, const WorkloadSpec& wl) {
    validate(cfg);
    SimReport rep;
    if (wl.n_encrypt == 0 && wl.n_decrypt == 0) return rep;

    switch (cfg.mode) {
        case SimMode::DualEncrypt:
            if (wl.n_decrypt != 0)
                throw std::invalid_argument("dual_encrypt mode cannot take decrypt work");
            break;
        case SimMode::DualDecrypt:
            if (wl.n_encrypt != 0)
                throw std::invalid_argument("dual_decrypt mode cannot take encrypt work");
            break;
        case SimMode::Mixed:
            break;
    }

    const MessageCosts mc = message_costs(cfg);
    const double bpc = dram_bytes_per_cycle(cfg);

    uint64_t compute_total = 0;
    switch (cfg.mode) {
        case SimMode::DualEncrypt: {
            const uint64_t per_rsc = ceil_div_u64(wl.n_encrypt, cfg.rsc_count);
            compute_total = per_rsc * mc.enc_compute_steady + mc.enc_fill;
            rep.ifft_cycles = per_rsc * mc.enc_ifft_cycles;
            rep.ntt_cycles = per_rsc * mc.enc_ntt_cycles;
            rep.mse_cycles = per_rsc * mc.enc_mse_cycles;
            break;
        }
        case SimMode::DualDecrypt: {
            const uint64_t per_rsc = ceil_div_u64(wl.n_decrypt, cfg.rsc_count);
            compute_total = per_rsc * mc.dec_compute_steady + mc.dec_fill;
            rep.intt_cycles = per_rsc * mc.dec_intt_cycles;
            rep.fft_cycles = per_rsc * mc.dec_fft_cycles;
            rep.mse_cycles = per_rsc * mc.dec_mse_cycles;
            break;
        }
        case SimMode::Mixed: {
            // static assignment: one core per direction
            const uint64_t enc_makespan =
                wl.n_encrypt ? wl.n_encrypt * mc.enc_compute_steady + mc.enc_fill : 0;
            const uint64_t dec_makespan =
                wl.n_decrypt ? wl.n_decrypt * mc.dec_compute_steady + mc.dec_fill : 0;
            compute_total = std::max(enc_makespan, dec_makespan);
            rep.ifft_cycles = wl.n_encrypt * mc.enc_ifft_cycles;
            rep.ntt_cycles = wl.n_encrypt * mc.enc_ntt_cycles;
            rep.intt_cycles = wl.n_decrypt * mc.dec_intt_cycles;
            rep.fft_cycles = wl.n_decrypt * mc.dec_fft_cycles;
            rep.mse_cycles =
                wl.n_encrypt * mc.enc_mse_cycles + wl.n_decrypt * mc.dec_mse_cycles;
            break;
        }
    }

    rep.ema_bytes_in = wl.n_encrypt * mc.enc_bytes_in + wl.n_decrypt * mc.dec_bytes_in;
    rep.ema_bytes_out = wl.n_encrypt * mc.enc_bytes_out + wl.n_decrypt * mc.dec_bytes_out;
    rep.dram_in_cycles = (uint64_t)std::ceil((double)rep.ema_bytes_in / bpc);
    rep.dram_out_cycles = (uint64_t)std::ceil((double)rep.ema_bytes_out / bpc);
    const uint64_t dram_total = rep.dram_in_cycles + rep.dram_out_cycles;

    rep.total_cycles = std::max(compute_total, dram_total);
    rep.stall_cycles_dram = rep.total_cycles - compute_total;
    rep.stall_cycles_fifo = 0;  // feedforward pipelines, sized FIFOs never back-pressure
    rep.wall_seconds = (double)rep.total_cycles / cfg.clock_hz;
    rep.throughput_ct_per_sec =
        (double)(wl.n_encrypt + wl.n_decrypt) / rep.wall_seconds;
    return rep;
}

LaneSweepResult lane_sweep(const SimConfig& cfg, const std::vector<uint32_t>& lane_options) {
    LaneSweepResult result;
    for (uint32_t lanes : lane_options) {
        if ((lanes & (lanes - 1)) != 0 || lanes < 2)
            throw std::invalid_argument("lane options must be powers of two >= 2");
        SimConfig c = cfg;
        c.lanes_per_pnl = lanes;
        validate(c);
        const MessageCosts mc = message_costs(c);
        const double bpc = dram_bytes_per_cycle(c);
        const uint64_t dram =
            (uint64_t)std::ceil((double)(mc.enc_bytes_in + mc.enc_bytes_out) / bpc);
        const uint64_t window = std::max(mc.enc_compute_steady, dram);
        LaneSweepRow row;
        row.lanes = lanes;
        row.steady_cycles_per_ct = window;
        row.throughput_ct_per_sec = cfg.clock_hz / (double)window;
        row.stall_fraction = (double)(window - mc.enc_compute_steady) / (double)window;
        result.rows.push_back(row);
        if (result.knee_lanes == 0 && mc.enc_compute_steady <= dram) result.knee_lanes = lanes;
    }
    if (result.knee_lanes == 0 && !result.rows.empty()) result.knee_lanes = result.rows.back().lanes;
    return result;
}

uint32_t analytic_knee(const SimConfig& cfg, const std::vector<uint32_t>& lane_options) {
    // balance point: compute rate (coefficients per cycle) against the
    // channel's bytes per cycle, evaluated on the same steady window
    for (uint32_t lanes : lane_options) {
        SimConfig c = cfg;
        c.lanes_per_pnl = lanes;
        const MessageCosts mc = message_costs(c);
        const double dram_cycles =
            (double)(mc.enc_bytes_in + mc.enc_bytes_out) / dram_bytes_per_cycle(c);
        if ((double)mc.enc_compute_steady <= dram_cycles) return lanes;
    }
    return lane_options.empty() ? 0 : lane_options.back();
}

EmaAblationResult ema_ablation(const SimConfig& cfg, const WorkloadSpec& wl) {
    EmaAblationResult result;
    const auto run = [&](OnchipFlags flags) {
        SimConfig c = cfg;
        c.onchip = flags;
        const SimReport rep = simulate(c, wl);
        EmaRow row;
        row.latency_cycles = rep.total_cycles;
        row.ema_bytes = rep.ema_bytes_in + rep.ema_bytes_out;
        return row;
    };
    EmaRow base = run({false, false});
    base.variant = EmaVariant::Base;
    EmaRow tfgen = run({true, false});
    tfgen.variant = EmaVariant::TfGen;
    EmaRow all = run({true, true});
    all.variant = EmaVariant::All;
    result.rows = {base, tfgen, all};
    result.base_over_all = (double)base.latency_cycles / (double)all.latency_cycles;
    return result;
}

FifoReport fifo_report(const SimConfig& cfg) {
    validate(cfg);
    const Widths w = widths_of(cfg);
    const std::vector<uint32_t> plan(w.log_n, 1);
    const auto sched = build_dataflow_schedule(w.lanes, (uint32_t)w.n, plan);

    auto primes = enumerate_ntt_friendly_primes(cfg.params.prime_bits - 1, cfg.params.prime_bits, 16);
    if (primes.empty()) throw std::runtime_error("no primes available for the FIFO probe");
    NttKernel kernel(primes[0], w.log_n);
    std::vector<uint64_t> input(w.n);
    uint64_t x = 0x243f6a8885a308d3ull;
    for (auto& v : input) {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        v = x % kernel.q();
    }
    StreamRunStats stats;
    stream_transform(sched, kernel, input, Direction::Forward, &stats);

    FifoReport rep;
    rep.doubling_holds = true;
    uint64_t prev = 0;
    for (uint32_t level = 0; level < w.log_n; ++level) {
        FifoStageRow row;
        row.stage = level;
        row.declared_words = sched.level_fifo_words[level];
        row.observed_words = stats.level_fifo_high_water[level];
        if (row.declared_words != row.observed_words) rep.doubling_holds = false;
        if (row.declared_words > 0) {
            if (prev > 0 && row.declared_words != 2 * prev) rep.doubling_holds = false;
            prev = row.declared_words;
        }
        rep.stages.push_back(row);
    }
    return rep;
}

}  // namespace cks
