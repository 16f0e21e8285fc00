// Counts arithmetic units across pipelined NTT/FFT design configurations,
// validates the folded-twiddle scheduling, and models 4:1 reconfigurable
// unit sharing between modular and complex floating-point multipliers.
//
// Counting convention (structural, independent of prime or float format):
//  - Butterfly twiddle positions: P/2 per butterfly level, log2(N) levels.
//    Folded-twiddle (merged) plans bear twiddles at every level and need no
//    other multipliers: P/2 * log2(N), the theoretical minimum.
//  - Conventional (unmerged) designs add auxiliary stream banks of P lane
//    multipliers plus one sequence-generator multiplier each: the forward
//    pre-twist, the inverse post-twist, and the inverse 1/N scaling. A plan
//    whose first stage radix is at least 4 absorbs the pre-twist into that
//    stage's composite input column, leaving two banks.
//  - Single-level stages cannot host the composite fold, so a merge request
//    on a multi-stage radix-2 plan degrades to the conventional mapping
//    (single-stage plans span the whole transform and always fold).
//    Per-transform
//    twiddle multiplications count the folded schedule (all butterflies) for
//    merged plans and the uniform pre-twist bank (unit lane included) plus
//    the non-unit plain twiddles for conventional ones.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cks {

enum class EngineMode { Ntt, Fft, Reconfigurable };

struct PipelineConfig {
    uint32_t lanes = 8;  // P
    uint32_t log_n = 16;
    std::vector<uint32_t> radix_plan;  // log2 of each stage radix
    bool merged = true;
    EngineMode mode = EngineMode::Ntt;
};

struct MultiplierBudget {
    uint64_t modmul_count = 0;        // modular multiplier instances (NTT mode)
    uint64_t fpmul_count = 0;         // complex FP multiplier positions (FFT mode)
    uint64_t shared_unit_count = 0;   // reconfigurable units, 4 modmul <=> 1 complex
    uint64_t twiddle_mult_total = 0;  // per-transform twiddle multiplications
    bool merged_effective = false;    // whether the composite fold applied
};

// uniform power-of-two plans admit the fold; agrees with the constructive
// schedule check in the fourier module
bool merge_admissible(const std::vector<uint32_t>& radix_plan);

MultiplierBudget count_multipliers(const PipelineConfig& cfg);

struct ExploreRow {
    std::vector<uint32_t> radix_plan;
    bool merged = false;
    MultiplierBudget budget;
    double reduction_vs_radix2 = 0.0;  // vs the conventional radix-2 design
};

struct ExploreResult {
    std::vector<ExploreRow> rows;  // sorted by modmul_count
    uint64_t best_merged_modmul = 0;
    uint64_t radix2_conventional_modmul = 0;
    uint64_t radix4_conventional_modmul = 0;
    double reduction_vs_radix2 = 0.0;   // best merged vs conventional radix-2
    double reduction_vs_radix4 = 0.0;   // best merged vs conventional radix-2^2
};

// enumerates every stage-radix composition with radices <= 2^4
ExploreResult explore_configs(uint32_t lanes, uint32_t log_n);

std::string plan_to_string(const std::vector<uint32_t>& radix_plan);
std::vector<uint32_t> plan_from_string(const std::string& text, uint32_t log_n);

// Table-driven relative areas for the proxy report (um^2 per multiplier).
struct AreaModel {
    double barrett = 35054.0;
    double vanilla_montgomery = 19255.0;
    double ntt_friendly_montgomery = 11328.0;
};

struct SharedBudgetReport {
    MultiplierBudget combined;
    uint64_t disjoint_units = 0;     // modmul-equivalents without sharing
    double shared_area_um2 = 0.0;    // shared units at the NTT-friendly area
    double disjoint_area_um2 = 0.0;  // same design without sharing
    double baseline_area_um2 = 0.0;  // conventional radix-2 disjoint, vanilla units
    double saving_vs_disjoint = 0.0;
    double saving_vs_baseline = 0.0;
};

// 4:1 sharing: reconfigurable unit count = max(ntt modmuls, 4 x complex FP
// positions). The area figures are a multiplier-count proxy only.
SharedBudgetReport shared_budget(const MultiplierBudget& ntt, const MultiplierBudget& fft,
                                 uint32_t lanes, uint32_t log_n, const AreaModel& areas = {});

}  // namespace cks
