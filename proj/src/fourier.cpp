#include "ckkstream/fourier.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cks {

namespace {

uint32_t log2_exact(uint32_t n) {
    uint32_t l = 0;
    while ((1u << l) < n) ++l;
    if ((1u << l) != n) throw std::invalid_argument("size must be a power of two");
    return l;
}

uint64_t find_psi(uint64_t q, uint32_t n) {
    const uint64_t order = 2ull * n;
    if ((q - 1) % order != 0)
        throw std::invalid_argument("prime does not support a primitive 2N-th root");
    const uint64_t exp = (q - 1) / order;
    for (uint64_t g = 2; g < q; ++g) {
        const uint64_t cand = pow_mod(g, exp, q);
        if (cand != 0 && pow_mod(cand, n, q) == q - 1) return cand;
    }
    throw std::runtime_error("no primitive 2N-th root found");
}

}  // namespace

NttKernel::NttKernel(const NttFriendlyPrime& prime, uint32_t log_n)
    : ctx_(make_montgomery_context(prime)), n_(1u << log_n), log_n_(log_n) {
    if (prime.two_adicity < log_n + 1)
        throw std::invalid_argument("prime two-adicity too small for this transform size");
    const uint64_t q = ctx_.q();
    const uint64_t psi = find_psi(q, n_);
    const uint64_t psi_inv = pow_mod(psi, q - 2, q);

    psi_rev_mont_.resize(n_);
    psi_inv_rev_mont_.resize(n_);
    uint64_t fwd = 1, inv = 1;
    for (uint32_t j = 0; j < n_; ++j) {
        const uint32_t idx = bit_reverse32(j, log_n_);
        psi_rev_mont_[idx] = ctx_.to_mont(fwd);
        psi_inv_rev_mont_[idx] = ctx_.to_mont(inv);
        fwd = mul_mod(fwd, psi, q);
        inv = mul_mod(inv, psi_inv, q);
    }
    const uint64_t n_inv = pow_mod(n_ % q, q - 2, q);
    n_inv_mont_ = ctx_.to_mont(n_inv);

    seeds_.q = q;
    seeds_.log_n = log_n_;
    seeds_.psi = psi;
    seeds_.psi_inv = psi_inv;
    seeds_.n_inv = n_inv;
    seeds_.forward.resize(log_n_);
    seeds_.inverse.resize(log_n_);
    for (uint32_t level = 0; level < log_n_; ++level) {
        const uint32_t m = 1u << level;
        const uint64_t base_exp = n_ / (2 * m);
        const uint64_t step_exp = n_ / m;
        seeds_.forward[level] = {pow_mod(psi, base_exp, q), pow_mod(psi, step_exp, q), m};
        seeds_.inverse[level] = {pow_mod(psi_inv, base_exp, q), pow_mod(psi_inv, step_exp, q), m};
    }
}

uint64_t NttKernel::table_twiddle(uint32_t index) const {
    return ctx_.from_mont(psi_rev_mont_.at(index));
}
uint64_t NttKernel::table_twiddle_inv(uint32_t index) const {
    return ctx_.from_mont(psi_inv_rev_mont_.at(index));
}

void NttKernel::forward_inplace_bitrev(uint64_t* a) const {
    const uint64_t q = ctx_.q();
    uint32_t t = n_;
    for (uint32_t m = 1; m < n_; m <<= 1) {
        t >>= 1;
        for (uint32_t i = 0; i < m; ++i) {
            const uint32_t j1 = 2 * i * t;
            const uint64_t s = psi_rev_mont_[m + i];
            for (uint32_t j = j1; j < j1 + t; ++j) {
                const uint64_t u = a[j];
                const uint64_t v = ctx_.mul_unchecked(a[j + t], s);
                a[j] = add_mod(u, v, q);
                a[j + t] = sub_mod(u, v, q);
            }
        }
    }
}

void NttKernel::inverse_inplace_from_bitrev(uint64_t* a) const {
    const uint64_t q = ctx_.q();
    uint32_t t = 1;
    for (uint32_t m = n_; m > 1; m >>= 1) {
        uint32_t j1 = 0;
        const uint32_t h = m >> 1;
        for (uint32_t i = 0; i < h; ++i) {
            const uint64_t s = psi_inv_rev_mont_[h + i];
            for (uint32_t j = j1; j < j1 + t; ++j) {
                const uint64_t u = a[j];
                const uint64_t v = a[j + t];
                a[j] = add_mod(u, v, q);
                a[j + t] = ctx_.mul_unchecked(sub_mod(u, v, q), s);
            }
            j1 += 2 * t;
        }
        t <<= 1;
    }
    for (uint32_t j = 0; j < n_; ++j) a[j] = ctx_.mul_unchecked(a[j], n_inv_mont_);
}

std::vector<uint64_t> reference_transform(const std::vector<uint64_t>& limb, uint64_t q,
                                          uint64_t psi, Direction dir) {
    const size_t n = limb.size();
    if (n > (1u << 12)) throw std::invalid_argument("reference_transform: oracle limited to N <= 4096");
    log2_exact((uint32_t)n);
    const uint64_t w = mul_mod(psi, psi, q);
    std::vector<uint64_t> out(n, 0);
    if (dir == Direction::Forward) {
        // A[k] = sum_n a[n] * W^(kn) * psi^n
        for (size_t k = 0; k < n; ++k) {
            uint64_t acc = 0;
            const uint64_t wk = pow_mod(w, k, q);
            uint64_t wkn = 1;  // W^(kn)
            uint64_t psin = 1; // psi^n
            for (size_t i = 0; i < n; ++i) {
                acc = add_mod(acc, mul_mod(limb[i], mul_mod(wkn, psin, q), q), q);
                wkn = mul_mod(wkn, wk, q);
                psin = mul_mod(psin, psi, q);
            }
            out[k] = acc;
        }
    } else {
        // a[n] = N^-1 * psi^-n * sum_k A[k] * W^(-kn)
        const uint64_t n_inv = pow_mod(n % q, q - 2, q);
        const uint64_t w_inv = pow_mod(w, q - 2, q);
        const uint64_t psi_inv = pow_mod(psi, q - 2, q);
        for (size_t i = 0; i < n; ++i) {
            uint64_t acc = 0;
            const uint64_t wi = pow_mod(w_inv, i, q);
            uint64_t wkn = 1;
            for (size_t k = 0; k < n; ++k) {
                acc = add_mod(acc, mul_mod(limb[k], wkn, q), q);
                wkn = mul_mod(wkn, wi, q);
            }
            out[i] = mul_mod(mul_mod(acc, pow_mod(psi_inv, i, q), q), n_inv, q);
        }
    }
    return out;
}

FourierContext make_fourier_context(const RnsBasis& basis, uint32_t log_n) {
    FourierContext ctx;
    ctx.log_n = log_n;
    ctx.n = 1u << log_n;
    ctx.kernels.reserve(basis.size());
    for (const auto& p : basis.primes) ctx.kernels.emplace_back(p, log_n);
    return ctx;
}

namespace {

void check_poly_matches(const RnsPolynomial& poly, const FourierContext& ctx) {
    if (poly.degree != ctx.n) throw std::invalid_argument("polynomial degree does not match context");
    if (poly.limb_count() != ctx.kernels.size())
        throw std::invalid_argument("limb count does not match context");
    for (size_t j = 0; j < poly.limb_count(); ++j)
        if (poly.prime_ids[j] != ctx.kernels[j].q())
            throw std::invalid_argument("polynomial primes do not match context");
}

void permute_bitrev(std::vector<uint64_t>& v, uint32_t log_n) {
    for (uint32_t i = 0; i < v.size(); ++i) {
        const uint32_t r = bit_reverse32(i, log_n);
        if (r > i) std::swap(v[i], v[r]);
    }
}

}  // namespace

void to_natural_order(RnsPolynomial& poly) {
    if (poly.ordering == PolyOrdering::Natural) return;
    const uint32_t log_n = log2_exact(poly.degree);
    for (auto& limb : poly.limbs) permute_bitrev(limb, log_n);
    poly.ordering = PolyOrdering::Natural;
}

void to_bit_reversed_order(RnsPolynomial& poly) {
    if (poly.ordering == PolyOrdering::BitReversed) return;
    const uint32_t log_n = log2_exact(poly.degree);
    for (auto& limb : poly.limbs) permute_bitrev(limb, log_n);
    poly.ordering = PolyOrdering::BitReversed;
}

void negacyclic_ntt(RnsPolynomial& poly, const FourierContext& ctx, Direction dir) {
    check_poly_matches(poly, ctx);
    if (dir == Direction::Forward) {
        if (poly.domain != PolyDomain::Coefficient)
            throw std::invalid_argument("forward transform expects coefficient domain");
        to_natural_order(poly);
        for (size_t j = 0; j < poly.limb_count(); ++j)
            ctx.kernels[j].forward_inplace_bitrev(poly.limbs[j].data());
        poly.domain = PolyDomain::Ntt;
        poly.ordering = PolyOrdering::BitReversed;
        to_natural_order(poly);
    } else {
        if (poly.domain != PolyDomain::Ntt)
            throw std::invalid_argument("inverse transform expects NTT domain");
        to_bit_reversed_order(poly);
        for (size_t j = 0; j < poly.limb_count(); ++j)
            ctx.kernels[j].inverse_inplace_from_bitrev(poly.limbs[j].data());
        poly.domain = PolyDomain::Coefficient;
        poly.ordering = PolyOrdering::Natural;
    }
}

RnsPolynomial negacyclic_polymul(const RnsPolynomial& a, const RnsPolynomial& b,
                                 const FourierContext& ctx) {
    check_poly_matches(a, ctx);
    check_poly_matches(b, ctx);
    if (a.domain != PolyDomain::Coefficient || b.domain != PolyDomain::Coefficient)
        throw std::invalid_argument("negacyclic_polymul expects coefficient-domain inputs");
    if (a.ordering != PolyOrdering::Natural || b.ordering != PolyOrdering::Natural)
        throw std::invalid_argument("negacyclic_polymul expects natural ordering");

    RnsPolynomial out = a;
    for (size_t j = 0; j < a.limb_count(); ++j) {
        const NttKernel& k = ctx.kernels[j];
        std::vector<uint64_t> ta = a.limbs[j];
        std::vector<uint64_t> tb = b.limbs[j];
        k.forward_inplace_bitrev(ta.data());
        k.forward_inplace_bitrev(tb.data());
        for (uint32_t i = 0; i < ctx.n; ++i) ta[i] = k.pointwise_mul(ta[i], tb[i]);
        k.inverse_inplace_from_bitrev(ta.data());
        out.limbs[j] = std::move(ta);
    }
    out.domain = PolyDomain::Coefficient;
    out.ordering = PolyOrdering::Natural;
    return out;
}

// ---------------------------------------------------------------------------
// dataflow
// ---------------------------------------------------------------------------

DataflowSchedule build_dataflow_schedule(uint32_t lanes, uint32_t n,
                                         const std::vector<uint32_t>& radix_plan) {
    if (lanes != 2 && lanes != 4 && lanes != 8 && lanes != 16)
        throw std::invalid_argument("lanes must be one of {2,4,8,16}");
    const uint32_t log_n = log2_exact(n);
    if (n % lanes != 0 || lanes > n) throw std::invalid_argument("lanes must divide N");
    uint32_t total = 0;
    for (uint32_t r : radix_plan) {
        if (r == 0 || r > 16) throw std::invalid_argument("stage radix out of range");
        total += r;
    }
    if (total != log_n)
        throw std::invalid_argument("radix plan product does not equal N");

    DataflowSchedule sched;
    sched.lanes = lanes;
    sched.n = n;
    sched.log_n = log_n;
    sched.radix_plan = radix_plan;
    sched.level_fifo_words.resize(log_n);
    for (uint32_t level = 0; level < log_n; ++level) {
        const uint64_t stride = 1ull << level;  // in stream positions
        sched.level_fifo_words[level] = stride >= lanes ? stride / lanes : 0;
        sched.pipeline_fill_words += sched.level_fifo_words[level];
    }
    uint32_t level = 0;
    for (uint32_t r : radix_plan) {
        DataflowStage st;
        st.radix_log2 = r;
        st.first_level = level;
        for (uint32_t i = 0; i < r; ++i) st.fifo_words += sched.level_fifo_words[level + i];
        sched.stages.push_back(st);
        level += r;
    }
    return sched;
}

bool merged_schedule_admissible(const DataflowSchedule& sched) {
    // the unified generator wants a constant period ratio between consecutive
    // stage twiddle streams, which holds exactly for uniform radix plans
    if (sched.radix_plan.empty()) return false;
    uint64_t prev_period = 0;
    uint64_t ratio = 0;
    uint32_t level = 0;
    for (size_t i = 0; i < sched.radix_plan.size(); ++i) {
        level += sched.radix_plan[i];
        const uint64_t period = 1ull << (level - 1);  // last level of the stage
        if (i > 0) {
            const uint64_t r = period / prev_period;
            if (ratio == 0)
                ratio = r;
            else if (r != ratio)
                return false;
            if (r != (1ull << sched.radix_plan[i])) return false;
        }
        prev_period = period;
    }
    if (sched.radix_plan.size() > 1 && sched.radix_plan[0] != sched.radix_plan[1]) return false;
    return true;
}

std::string schedule_to_text(const DataflowSchedule& sched, const TwiddleSeeds& seeds) {
    std::ostringstream os;
    os << "lanes=" << sched.lanes << " n=" << sched.n << " stages=" << sched.stage_count() << "\n";
    for (size_t s = 0; s < sched.stages.size(); ++s) {
        const auto& st = sched.stages[s];
        os << "stage " << s << " radix=2^" << st.radix_log2 << " fifo_words=" << st.fifo_words;
        for (uint32_t l = st.first_level; l < st.first_level + st.radix_log2; ++l) {
            const auto& seed = seeds.forward.at(l);
            os << " | level " << l << " base=" << seed.base << " step=" << seed.step
               << " period=" << seed.period;
        }
        os << "\n";
    }
    return os.str();
}

OtfTwiddleStream::OtfTwiddleStream(const TwiddleSeeds& seeds, const DataflowSchedule& sched,
                                   uint32_t stage, Direction dir, const MontgomeryContext& ctx)
    : seeds_(&seeds), ctx_(&ctx), dir_(dir), n_(sched.n) {
    if (stage >= sched.stage_count()) throw std::invalid_argument("stage out of range");
    if (seeds.log_n != sched.log_n) throw std::invalid_argument("seed/schedule size mismatch");
    if (seeds.q != ctx.q()) throw std::invalid_argument("seed/context prime mismatch");
    const auto& st = sched.stages[stage];
    // the inverse pipeline is the transpose: it walks a stage's levels from
    // deepest to shallowest
    if (dir == Direction::Forward) {
        level_ = st.first_level;
        last_level_ = st.first_level + st.radix_log2 - 1;
    } else {
        level_ = st.first_level + st.radix_log2 - 1;
        last_level_ = st.first_level;
    }
    remaining_ = (uint64_t)(n_ / 2) * st.radix_log2;
    load_level(level_);
}

void OtfTwiddleStream::load_level(uint32_t level) {
    const auto& seed = dir_ == Direction::Forward ? seeds_->forward.at(level)
                                                  : seeds_->inverse.at(level);
    base_mont_ = ctx_->to_mont(seed.base);
    step_mont_ = ctx_->to_mont(seed.step);
    cur_mont_ = base_mont_;
    period_ = seed.period;
    phase_ = 0;
    level_remaining_ = n_ / 2;
}

bool OtfTwiddleStream::next(uint64_t* out) {
    uint64_t mont = 0;
    if (!next_mont_internal(&mont)) return false;
    *out = ctx_->from_mont(mont);
    return true;
}

bool OtfTwiddleStream::next_mont_internal(uint64_t* out) {
    if (remaining_ == 0) return false;
    *out = cur_mont_;
    --remaining_;
    --level_remaining_;
    ++phase_;
    if (phase_ == period_) {
        phase_ = 0;
        cur_mont_ = base_mont_;  // period reset
    } else {
        cur_mont_ = ctx_->mul_unchecked(cur_mont_, step_mont_);
    }
    if (level_remaining_ == 0 && level_ != last_level_)
        load_level(dir_ == Direction::Forward ? ++level_ : --level_);
    return true;
}

std::vector<uint64_t> stream_transform(const DataflowSchedule& sched, const NttKernel& kernel,
                                       const std::vector<uint64_t>& input_natural, Direction dir,
                                       StreamRunStats* stats) {
    const uint32_t n = sched.n;
    const uint32_t lanes = sched.lanes;
    if (input_natural.size() != n) throw std::invalid_argument("stream_transform: size mismatch");
    if (kernel.n() != n) throw std::invalid_argument("stream_transform: kernel size mismatch");
    const uint32_t log_n = sched.log_n;
    const uint64_t q = kernel.q();
    const MontgomeryContext& ctx = kernel.ctx();

    if (stats) {
        stats->level_fifo_high_water.assign(log_n, 0);
        stats->words_streamed = n / lanes;
    }

    // Stream positions: the forward pipeline consumes coefficients in
    // bit-reversed position order and emits natural order; the inverse is the
    // transposed pipeline, consuming natural order and emitting bit-reversed.
    std::vector<uint64_t> cur(n);
    if (dir == Direction::Forward) {
        for (uint32_t p = 0; p < n; ++p) cur[p] = input_natural[bit_reverse32(p, log_n)];
    } else {
        cur = input_natural;
    }

    const uint32_t words = n / lanes;
    auto run_level = [&](uint32_t level, OtfTwiddleStream& tw) {
        const uint64_t stride = 1ull << level;
        const bool fwd = dir == Direction::Forward;
        if (stride < lanes) {
            // butterflies complete within each arriving word
            for (uint32_t t = 0; t < words; ++t) {
                const uint32_t word_base = t * lanes;
                for (uint32_t i = 0; i < lanes; ++i) {
                    if (i & stride) continue;
                    uint64_t mont_tw;
                    tw.next_mont_internal(&mont_tw);
                    uint64_t& lo = cur[word_base + i];
                    uint64_t& hi = cur[word_base + i + stride];
                    if (fwd) {
                        const uint64_t v = ctx.mul_unchecked(hi, mont_tw);
                        const uint64_t u = lo;
                        lo = add_mod(u, v, q);
                        hi = sub_mod(u, v, q);
                    } else {
                        const uint64_t u = add_mod(lo, hi, q);
                        hi = ctx.mul_unchecked(sub_mod(lo, hi, q), mont_tw);
                        lo = u;
                    }
                }
            }
        } else {
            const uint32_t delay = (uint32_t)(stride / lanes);
            uint64_t occupancy = 0, high_water = 0;
            for (uint32_t t = 0; t < words; ++t) {
                if ((t & delay) == 0) {
                    // low word: buffered until its partner arrives
                    ++occupancy;
                    high_water = std::max(high_water, occupancy);
                } else {
                    const uint32_t t_low = t - delay;
                    for (uint32_t i = 0; i < lanes; ++i) {
                        uint64_t mont_tw;
                        tw.next_mont_internal(&mont_tw);
                        uint64_t& lo = cur[t_low * lanes + i];
                        uint64_t& hi = cur[t * lanes + i];
                        if (fwd) {
                            const uint64_t v = ctx.mul_unchecked(hi, mont_tw);
                            const uint64_t u = lo;
                            lo = add_mod(u, v, q);
                            hi = sub_mod(u, v, q);
                        } else {
                            const uint64_t u = add_mod(lo, hi, q);
                            hi = ctx.mul_unchecked(sub_mod(lo, hi, q), mont_tw);
                            lo = u;
                        }
                    }
                    --occupancy;
                }
            }
            if (stats) stats->level_fifo_high_water[level] = high_water;
        }
    };

    if (dir == Direction::Forward) {
        for (uint32_t stage = 0; stage < sched.stage_count(); ++stage) {
            OtfTwiddleStream tw(kernel.seeds(), sched, stage, dir, ctx);
            const auto& st = sched.stages[stage];
            for (uint32_t level = st.first_level; level < st.first_level + st.radix_log2; ++level)
                run_level(level, tw);
            if (tw.remaining() != 0) throw std::runtime_error("twiddle stream not fully consumed");
        }
    } else {
        for (uint32_t stage = sched.stage_count(); stage-- > 0;) {
            OtfTwiddleStream tw(kernel.seeds(), sched, stage, dir, ctx);
            const auto& st = sched.stages[stage];
            for (uint32_t level = st.first_level + st.radix_log2; level-- > st.first_level;)
                run_level(level, tw);
            if (tw.remaining() != 0) throw std::runtime_error("twiddle stream not fully consumed");
        }
    }

    if (dir == Direction::Inverse) {
        const uint64_t n_inv_mont = ctx.to_mont(kernel.seeds().n_inv);
        std::vector<uint64_t> out(n);
        for (uint32_t p = 0; p < n; ++p)
            out[bit_reverse32(p, log_n)] = ctx.mul_unchecked(cur[p], n_inv_mont);
        return out;
    }
    return cur;  // position order is the natural output order
}

uint64_t count_transform_twiddle_mults(const NttKernel& kernel,
                                       const std::vector<uint32_t>& radix_plan, bool merged) {
    const uint32_t n = kernel.n();
    const uint32_t log_n = kernel.log_n();
    const uint64_t q = kernel.q();
    uint32_t total = 0;
    uint32_t min_part = 0xffffffff;
    bool uniform = true;
    for (size_t i = 0; i < radix_plan.size(); ++i) {
        total += radix_plan[i];
        min_part = std::min(min_part, radix_plan[i]);
        if (radix_plan[i] != radix_plan[0]) uniform = false;
    }
    if (total != log_n) throw std::invalid_argument("radix plan does not cover the transform");

    // deterministic pseudo-random input
    std::vector<uint64_t> a(n);
    uint64_t x = q ^ 0x9e3779b97f4a7c15ull;
    for (auto& v : a) {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        v = x % q;
    }

    // merged mapping: per-level folded twiddles, every butterfly multiplies
    std::vector<uint64_t> merged_out = a;
    uint64_t merged_count = 0;
    {
        uint64_t* d = merged_out.data();
        uint32_t t = n;
        for (uint32_t m = 1; m < n; m <<= 1) {
            t >>= 1;
            for (uint32_t i = 0; i < m; ++i) {
                const uint64_t s = kernel.mont_forward_twiddle(m + i);
                const uint64_t plain = kernel.ctx().from_mont(s);
                for (uint32_t j = 2 * i * t; j < 2 * i * t + t; ++j) {
                    const uint64_t u = d[j];
                    const uint64_t v = kernel.ctx().mul_unchecked(d[j + t], s);
                    d[j] = add_mod(u, v, q);
                    d[j + t] = sub_mod(u, v, q);
                    if (plain != 1) ++merged_count;
                }
            }
        }
    }

    // conventional mapping: uniform pre-twist bank + plain cyclic NTT,
    // counting the bank's N multiplications and the non-unit plain twiddles
    std::vector<uint64_t> conv_out = a;
    uint64_t conv_count = 0;
    {
        const uint64_t psi = kernel.seeds().psi;
        const uint64_t w = mul_mod(psi, psi, q);
        uint64_t psin = 1;
        for (uint32_t i = 0; i < n; ++i) {
            conv_out[i] = mul_mod(conv_out[i], psin, q);
            ++conv_count;  // the bank multiplies every lane, unit factor included
            psin = mul_mod(psin, psi, q);
        }
        uint64_t* d = conv_out.data();
        uint32_t t = n;
        for (uint32_t m = 1; m < n; m <<= 1) {
            t >>= 1;
            uint32_t mu = 0;
            while ((1u << mu) < m) ++mu;
            for (uint32_t i = 0; i < m; ++i) {
                const uint64_t exp = (uint64_t)(n / (2 * m)) * bit_reverse32(i, mu);
                const uint64_t s = pow_mod(w, exp, q);
                for (uint32_t j = 2 * i * t; j < 2 * i * t + t; ++j) {
                    const uint64_t u = d[j];
                    const uint64_t v = s == 1 ? d[j + t] : mul_mod(d[j + t], s, q);
                    d[j] = add_mod(u, v, q);
                    d[j + t] = sub_mod(u, v, q);
                    if (s != 1) ++conv_count;
                }
            }
        }
    }
    if (merged_out != conv_out)
        throw std::runtime_error("conventional and merged mappings disagree");

    const bool merged_mapping =
        merged && uniform && (radix_plan.size() == 1 || min_part >= 2);
    return merged_mapping ? merged_count : conv_count;
}

}  // namespace cks
