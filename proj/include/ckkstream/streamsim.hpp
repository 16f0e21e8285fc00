// Deterministic cycle-level model of the two-core streaming client
// architecture: pipelined transform lanes, a shared DRAM channel with burst
// quantization, double-buffered scratchpads, three operational modes, and
// external-memory-access accounting tied to the memory accountant.
//
// Time model: pass-granular token flow. A transform pass streams N points at
// P (or the ganged complex width) per cycle; pipeline fill is the sum of the
// per-level commutator delays and multiplier latencies. Steady-state
// throughput excludes fills (back-to-back streams hide them); reported
// latency includes them once.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckkstream/ckks.hpp"

namespace cks {

enum class SimMode { DualEncrypt, DualDecrypt, Mixed };
enum class TwiddleFetch { PerPass, PerLimb };

struct SimConfig {
    double clock_hz = 6.0e8;
    double dram_bytes_per_sec = 68.4e9;
    uint32_t dram_burst_bytes = 64;
    uint32_t lanes_per_pnl = 8;   // P
    uint32_t pnl_per_rsc = 4;
    uint32_t rsc_count = 2;
    uint64_t global_scratch_bytes = 880 * 1024;
    uint32_t word_bits_int = 44;
    uint32_t word_bits_fp = 55;
    uint32_t mult_latency = 3;  // modular multiplier pipeline stages
    uint32_t mse_latency = 1;
    SimMode mode = SimMode::DualEncrypt;
    OnchipFlags onchip{true, true};
    TwiddleFetch twiddle_fetch = TwiddleFetch::PerPass;
    uint32_t twiddle_buffer_words = 32;  // per-stage period registers without OTF
    uint32_t decrypt_level = 2;          // server returns arrive at this level
    CkksParams params;
};

struct WorkloadSpec {
    uint64_t n_encrypt = 0;
    uint64_t n_decrypt = 0;
};

struct SimReport {
    uint64_t total_cycles = 0;
    double wall_seconds = 0.0;
    uint64_t ifft_cycles = 0;
    uint64_t ntt_cycles = 0;
    uint64_t mse_cycles = 0;
    uint64_t intt_cycles = 0;
    uint64_t fft_cycles = 0;
    uint64_t dram_in_cycles = 0;
    uint64_t dram_out_cycles = 0;
    uint64_t ema_bytes_in = 0;
    uint64_t ema_bytes_out = 0;
    uint64_t stall_cycles_dram = 0;
    uint64_t stall_cycles_fifo = 0;
    double throughput_ct_per_sec = 0.0;
};

// per-message byte and cycle primitives, exposed for oracle cross-checks
struct MessageCosts {
    uint64_t enc_compute_steady = 0;  // cycles, fills excluded
    uint64_t dec_compute_steady = 0;
    uint64_t enc_fill = 0;
    uint64_t dec_fill = 0;
    uint64_t enc_bytes_in = 0;
    uint64_t enc_bytes_out = 0;
    uint64_t dec_bytes_in = 0;
    uint64_t dec_bytes_out = 0;
    uint64_t enc_ifft_cycles = 0;
    uint64_t enc_ntt_cycles = 0;
    uint64_t dec_intt_cycles = 0;
    uint64_t dec_fft_cycles = 0;
    uint64_t enc_mse_cycles = 0;
    uint64_t dec_mse_cycles = 0;
};

MessageCosts message_costs(const SimConfig& cfg);

// cycles one PNL needs for a single-limb transform pass: N/P plus the
// pipeline depth (sum of per-level FIFO delays and multiplier latencies)
uint64_t pnl_pass_cycles(const SimConfig& cfg);
uint64_t pnl_pipeline_depth(const SimConfig& cfg);

double dram_bytes_per_cycle(const SimConfig& cfg);

SimReport simulate(const SimConfig& cfg, const WorkloadSpec& wl);

struct LaneSweepRow {
    uint32_t lanes = 0;
    double throughput_ct_per_sec = 0.0;
    double stall_fraction = 0.0;    // dram-stall share of the steady window
    uint64_t steady_cycles_per_ct = 0;
};

// throughput as a function of P for a single encrypt stream against the
// memory channel; the saturation knee is the smallest P at which the stream
// turns DRAM-bound
struct LaneSweepResult {
    std::vector<LaneSweepRow> rows;
    uint32_t knee_lanes = 0;
};

LaneSweepResult lane_sweep(const SimConfig& cfg, const std::vector<uint32_t>& lane_options);

// analytic balance point: smallest P with compute(P) <= dram cycles
uint32_t analytic_knee(const SimConfig& cfg, const std::vector<uint32_t>& lane_options);

enum class EmaVariant { Base, TfGen, All };

struct EmaRow {
    EmaVariant variant;
    uint64_t latency_cycles = 0;
    uint64_t ema_bytes = 0;
};

struct EmaAblationResult {
    std::vector<EmaRow> rows;  // Base, TfGen, All
    double base_over_all = 0.0;
};

// Base fetches twiddles, masks/errors and keys from DRAM each use; TfGen
// generates twiddles on-chip only; All generates everything on-chip.
EmaAblationResult ema_ablation(const SimConfig& cfg, const WorkloadSpec& wl);

struct FifoStageRow {
    uint32_t stage = 0;
    uint64_t declared_words = 0;
    uint64_t observed_words = 0;
};

struct FifoReport {
    std::vector<FifoStageRow> stages;
    bool doubling_holds = false;
};

// streams one limb through the PNL schedule and reports per-stage occupancy
// high-water marks against the declared capacities
FifoReport fifo_report(const SimConfig& cfg);

}  // namespace cks
