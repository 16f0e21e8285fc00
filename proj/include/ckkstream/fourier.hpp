// Negacyclic NTT/INTT with merged pre/post-processing twiddles, reference
// DFT oracles, on-the-fly twiddle generation from compact per-stage seeds,
// and the MDC streaming dataflow schedule.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckkstream/modarith.hpp"
#include "ckkstream/rns_poly.hpp"

namespace cks {

enum class Direction { Forward, Inverse };

inline uint32_t bit_reverse32(uint32_t x, uint32_t bits) {
    uint32_t r = 0;
    for (uint32_t i = 0; i < bits; ++i) {
        r = (r << 1) | (x & 1);
        x >>= 1;
    }
    return r;
}

// Per-stage generator seed: the stage's twiddle stream is
//   base, base*step, base*step^2, ...  resetting every `period` factors.
struct TwiddleStageSeed {
    uint64_t base = 0;
    uint64_t step = 0;
    uint32_t period = 0;
};

// Compact twiddle material for one prime: a primitive 2N-th root, per-level
// (base, step) seeds for both directions, and N^-1 for the inverse.
struct TwiddleSeeds {
    uint64_t q = 0;
    uint32_t log_n = 0;
    uint64_t psi = 0;
    uint64_t psi_inv = 0;
    uint64_t n_inv = 0;
    std::vector<TwiddleStageSeed> forward;  // one per butterfly level
    std::vector<TwiddleStageSeed> inverse;
};

// Per-prime transform engine. Batch kernels use precomputed Montgomery-form
// tables; the streaming path regenerates twiddles from the seeds.
class NttKernel {
public:
    NttKernel(const NttFriendlyPrime& prime, uint32_t log_n);

    uint64_t q() const { return ctx_.q(); }
    uint32_t n() const { return n_; }
    uint32_t log_n() const { return log_n_; }
    const MontgomeryContext& ctx() const { return ctx_; }
    const TwiddleSeeds& seeds() const { return seeds_; }
    uint64_t psi() const { return seeds_.psi; }

    // natural order in, bit-reversed out (Cooley-Tukey, merged psi twiddles)
    void forward_inplace_bitrev(uint64_t* a) const;
    // bit-reversed in, natural out (Gentleman-Sande, merged psi^-1, deferred N^-1)
    void inverse_inplace_from_bitrev(uint64_t* a) const;

    // plain-domain pointwise product helper: returns a*b mod q
    uint64_t pointwise_mul(uint64_t a, uint64_t b) const {
        return ctx_.mul_unchecked(ctx_.mul_unchecked(a, b), ctx_.r2());
    }

    uint64_t table_twiddle(uint32_t index) const;          // psi^(brv(index)), plain domain
    uint64_t table_twiddle_inv(uint32_t index) const;      // psi^-brv(index), plain domain
    uint64_t mont_forward_twiddle(uint32_t index) const { return psi_rev_mont_[index]; }

private:
    MontgomeryContext ctx_;
    uint32_t n_ = 0;
    uint32_t log_n_ = 0;
    std::vector<uint64_t> psi_rev_mont_;
    std::vector<uint64_t> psi_inv_rev_mont_;
    uint64_t n_inv_mont_ = 0;
    TwiddleSeeds seeds_;
};

// O(N^2) evaluation of the negacyclic transform pair; the oracle reference.
// forward: A[k] = sum_n a[n] * W^(kn) * psi^n,  W = psi^2
// inverse: a[n] = N^-1 * psi^-n * sum_k A[k] * W^(-kn)
std::vector<uint64_t> reference_transform(const std::vector<uint64_t>& limb, uint64_t q,
                                          uint64_t psi, Direction dir);

// Basis-wide transform context.
struct FourierContext {
    uint32_t n = 0;
    uint32_t log_n = 0;
    std::vector<NttKernel> kernels;  // one per basis prime, same order
};

FourierContext make_fourier_context(const RnsBasis& basis, uint32_t log_n);

// Public transforms keep all outputs natural-ordered; bit-reversed ordering
// appears only as the explicit intermediate flag.
void negacyclic_ntt(RnsPolynomial& poly, const FourierContext& ctx, Direction dir);
RnsPolynomial negacyclic_polymul(const RnsPolynomial& a, const RnsPolynomial& b,
                                 const FourierContext& ctx);

void to_natural_order(RnsPolynomial& poly);
void to_bit_reversed_order(RnsPolynomial& poly);

// ---------------------------------------------------------------------------
// MDC streaming dataflow
// ---------------------------------------------------------------------------

struct DataflowStage {
    uint32_t radix_log2 = 0;   // butterfly levels grouped into this stage
    uint32_t first_level = 0;
    uint64_t fifo_words = 0;   // commutator delay, in P-wide words
};

struct DataflowSchedule {
    uint32_t lanes = 0;  // P
    uint32_t n = 0;
    uint32_t log_n = 0;
    std::vector<uint32_t> radix_plan;            // log2 of each stage radix
    std::vector<DataflowStage> stages;
    std::vector<uint64_t> level_fifo_words;      // per butterfly level
    uint64_t pipeline_fill_words = 0;            // sum of level delays

    uint32_t stage_count() const { return (uint32_t)stages.size(); }
};

// radix_plan entries are log2 radices; their sum must equal log2(N).
DataflowSchedule build_dataflow_schedule(uint32_t lanes, uint32_t n,
                                         const std::vector<uint32_t>& radix_plan);

// True when one (seed, step, period) generator per stage with a constant
// period ratio across stages covers the plan (uniform power-of-two radix).
bool merged_schedule_admissible(const DataflowSchedule& sched);

std::string schedule_to_text(const DataflowSchedule& sched, const TwiddleSeeds& seeds);

// Table-free per-stage twiddle stream in exact butterfly consumption order.
// Live mutable state is one field element plus counters.
class OtfTwiddleStream {
public:
    OtfTwiddleStream(const TwiddleSeeds& seeds, const DataflowSchedule& sched, uint32_t stage,
                     Direction dir, const MontgomeryContext& ctx);

    // next plain-domain factor; false when the stage's stream is exhausted
    bool next(uint64_t* out);
    // Montgomery-form variant for transform internals
    bool next_mont_internal(uint64_t* out);
    uint64_t remaining() const { return remaining_; }

private:
    void load_level(uint32_t level);

    const TwiddleSeeds* seeds_;
    const MontgomeryContext* ctx_;
    Direction dir_;
    uint32_t level_ = 0, last_level_ = 0;
    uint32_t n_ = 0;
    uint64_t base_mont_ = 0, step_mont_ = 0, cur_mont_ = 0;
    uint32_t period_ = 0, phase_ = 0;
    uint64_t level_remaining_ = 0, remaining_ = 0;
};

struct StreamRunStats {
    std::vector<uint64_t> level_fifo_high_water;  // observed words buffered per level
    uint64_t words_streamed = 0;
};

// Push coefficients through the schedule word by word. Input and output are
// natural-ordered; the machine internally streams bit-reversed positions.
// Twiddles come from OtfTwiddleStream, never from the kernel tables.
std::vector<uint64_t> stream_transform(const DataflowSchedule& sched, const NttKernel& kernel,
                                       const std::vector<uint64_t>& input_natural, Direction dir,
                                       StreamRunStats* stats = nullptr);

// Executes the forward transform under a plan's hardware mapping and tallies
// multiplier invocations: merged plans count every butterfly twiddle multiply;
// unmerged (and radix-2) plans count a uniform pre-twist bank pass of N
// multiplications plus the non-unit twiddles of the plain cyclic NTT.
// The two mappings are checked against each other for output equality.
uint64_t count_transform_twiddle_mults(const NttKernel& kernel,
                                       const std::vector<uint32_t>& radix_plan, bool merged);

}  // namespace cks
