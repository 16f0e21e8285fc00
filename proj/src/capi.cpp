#include "ckkstream.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckkstream/ckks.hpp"
#include "ckkstream/explorer.hpp"
#include "ckkstream/fourier.hpp"
#include "ckkstream/modarith.hpp"
#include "ckkstream/paramfile.hpp"
#include "ckkstream/serialize.hpp"
#include "ckkstream/streamsim.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
cks_status guarded(Fn&& fn) {
    try {
        fn();
        return CKS_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return CKS_ERR_INVALID;
    } catch (const std::range_error& e) {
        set_error(e.what());
        return CKS_ERR_RANGE;
    } catch (const std::ios_base::failure& e) {
        set_error(e.what());
        return CKS_ERR_IO;
    } catch (const std::runtime_error& e) {
        set_error(e.what());
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos ||
            what.find("cannot write") != std::string::npos ||
            what.find("container") != std::string::npos)
            return CKS_ERR_IO;
        return CKS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CKS_ERR_INTERNAL;
    }
}

cks::CkksParams to_cpp(const cks_params& p) {
    cks::CkksParams out;
    out.log_n = p.log_n;
    out.prime_bits = p.prime_bits;
    out.levels = p.levels;
    out.scale = p.scale;
    out.sigma = p.sigma;
    return out;
}

cks_params to_c(const cks::CkksParams& p) {
    return {p.log_n, p.prime_bits, p.levels, p.scale, p.sigma};
}

cks::SimConfig to_cpp(const cks_sim_config& c) {
    cks::SimConfig out;
    out.clock_hz = c.clock_hz;
    out.dram_bytes_per_sec = c.dram_bytes_per_sec;
    out.dram_burst_bytes = c.dram_burst_bytes;
    out.lanes_per_pnl = c.lanes_per_pnl;
    out.pnl_per_rsc = c.pnl_per_rsc;
    out.rsc_count = c.rsc_count;
    out.global_scratch_bytes = c.global_scratch_bytes;
    out.word_bits_int = c.word_bits_int;
    out.word_bits_fp = c.word_bits_fp;
    out.mult_latency = c.mult_latency;
    out.mse_latency = c.mse_latency;
    out.mode = c.mode == CKS_MODE_DUAL_ENCRYPT
                   ? cks::SimMode::DualEncrypt
                   : c.mode == CKS_MODE_DUAL_DECRYPT ? cks::SimMode::DualDecrypt
                                                     : cks::SimMode::Mixed;
    out.onchip = {c.onchip_twiddles != 0, c.onchip_randoms != 0};
    out.twiddle_fetch =
        c.twiddle_fetch_per_pass ? cks::TwiddleFetch::PerPass : cks::TwiddleFetch::PerLimb;
    out.twiddle_buffer_words = c.twiddle_buffer_words;
    out.decrypt_level = c.decrypt_level;
    out.params = to_cpp(c.params);
    return out;
}

cks_sim_config to_c(const cks::SimConfig& c) {
    cks_sim_config out{};
    out.clock_hz = c.clock_hz;
    out.dram_bytes_per_sec = c.dram_bytes_per_sec;
    out.dram_burst_bytes = c.dram_burst_bytes;
    out.lanes_per_pnl = c.lanes_per_pnl;
    out.pnl_per_rsc = c.pnl_per_rsc;
    out.rsc_count = c.rsc_count;
    out.global_scratch_bytes = c.global_scratch_bytes;
    out.word_bits_int = c.word_bits_int;
    out.word_bits_fp = c.word_bits_fp;
    out.mult_latency = c.mult_latency;
    out.mse_latency = c.mse_latency;
    out.mode = c.mode == cks::SimMode::DualEncrypt
                   ? CKS_MODE_DUAL_ENCRYPT
                   : c.mode == cks::SimMode::DualDecrypt ? CKS_MODE_DUAL_DECRYPT : CKS_MODE_MIXED;
    out.onchip_twiddles = c.onchip.twiddles ? 1 : 0;
    out.onchip_randoms = c.onchip.randoms ? 1 : 0;
    out.twiddle_fetch_per_pass = c.twiddle_fetch == cks::TwiddleFetch::PerPass ? 1 : 0;
    out.twiddle_buffer_words = c.twiddle_buffer_words;
    out.decrypt_level = c.decrypt_level;
    out.params = to_c(c.params);
    return out;
}

cks_sim_report to_c(const cks::SimReport& r) {
    cks_sim_report out{};
    out.total_cycles = r.total_cycles;
    out.wall_seconds = r.wall_seconds;
    out.ifft_cycles = r.ifft_cycles;
    out.ntt_cycles = r.ntt_cycles;
    out.mse_cycles = r.mse_cycles;
    out.intt_cycles = r.intt_cycles;
    out.fft_cycles = r.fft_cycles;
    out.dram_in_cycles = r.dram_in_cycles;
    out.dram_out_cycles = r.dram_out_cycles;
    out.ema_bytes_in = r.ema_bytes_in;
    out.ema_bytes_out = r.ema_bytes_out;
    out.stall_cycles_dram = r.stall_cycles_dram;
    out.stall_cycles_fifo = r.stall_cycles_fifo;
    out.throughput_ct_per_sec = r.throughput_ct_per_sec;
    return out;
}

std::vector<cks::RedComplex> slots_from_arrays(const double* re, const double* im, size_t n) {
    std::vector<cks::RedComplex> slots(n);
    for (size_t i = 0; i < n; ++i) slots[i] = {re[i], im ? im[i] : 0.0};
    return slots;
}

}  // namespace

struct cks_prime_list {
    std::vector<cks::NttFriendlyPrime> primes;
};
struct cks_context {
    cks::CkksContext ctx;
};
struct cks_keys {
    cks::KeyMaterial keys;
};
struct cks_plaintext {
    cks::Plaintext pt;
};
struct cks_ciphertext {
    cks::Ciphertext ct;
};

extern "C" {

const char* cks_status_name(cks_status status) {
    switch (status) {
        case CKS_OK: return "ok";
        case CKS_ERR_INVALID: return "invalid argument";
        case CKS_ERR_RANGE: return "out of range";
        case CKS_ERR_IO: return "io error";
        case CKS_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* cks_last_error(void) { return g_last_error.c_str(); }

const char* cks_version(void) { return "ckkstream 1.0.0"; }

void cks_params_default(cks_params* params) {
    if (params) *params = to_c(cks::CkksParams{});
}

cks_status cks_params_from_file(const char* path, cks_params* params) {
    return guarded([&] {
        if (!path || !params) throw std::invalid_argument("null argument");
        *params = to_c(cks::ckks_params_from_kv(cks::read_kv_file(path)));
    });
}

cks_status cks_primes_enumerate(uint32_t bit_lo, uint32_t bit_hi, uint32_t n,
                                cks_prime_list** out) {
    return guarded([&] {
        if (!out) throw std::invalid_argument("null output");
        auto list = std::make_unique<cks_prime_list>();
        list->primes = cks::enumerate_ntt_friendly_primes(bit_lo, bit_hi, n);
        *out = list.release();
    });
}

size_t cks_prime_list_size(const cks_prime_list* list) { return list ? list->primes.size() : 0; }

cks_status cks_prime_list_get(const cks_prime_list* list, size_t index, cks_prime_info* out) {
    return guarded([&] {
        if (!list || !out || index >= list->primes.size())
            throw std::invalid_argument("prime index out of range");
        const auto& p = list->primes[index];
        *out = {};
        out->q = p.q;
        out->p_bw = p.p_bw;
        out->n = p.n;
        out->two_adicity = p.two_adicity;
        out->term_count = (int32_t)p.k_terms.size();
        for (size_t i = 0; i < p.k_terms.size() && i < 3; ++i) {
            out->exp[i] = (int32_t)p.k_terms[i].exp;
            out->sign[i] = p.k_terms[i].sign;
        }
    });
}

void cks_prime_list_free(cks_prime_list* list) { delete list; }

cks_status cks_context_create(const cks_params* params, cks_context** out) {
    return guarded([&] {
        if (!params || !out) throw std::invalid_argument("null argument");
        auto ctx = std::make_unique<cks_context>(cks_context{cks::CkksContext(to_cpp(*params))});
        *out = ctx.release();
    });
}

void cks_context_free(cks_context* ctx) { delete ctx; }

uint32_t cks_context_slot_count(const cks_context* ctx) {
    return ctx ? ctx->ctx.params().slot_count() : 0;
}

cks_status cks_keygen(const cks_context* ctx, const char* seed_hex, cks_keys** out) {
    return guarded([&] {
        if (!ctx || !seed_hex || !out) throw std::invalid_argument("null argument");
        auto keys = std::make_unique<cks_keys>();
        keys->keys = cks::keygen(ctx->ctx, cks::Seed128::from_hex(seed_hex));
        *out = keys.release();
    });
}

void cks_keys_free(cks_keys* keys) { delete keys; }

cks_status cks_keys_save(const cks_keys* keys, const char* path) {
    return guarded([&] {
        if (!keys || !path) throw std::invalid_argument("null argument");
        cks::save_keys(keys->keys, path);
    });
}

cks_status cks_keys_load(const char* path, cks_keys** out) {
    return guarded([&] {
        if (!path || !out) throw std::invalid_argument("null argument");
        auto keys = std::make_unique<cks_keys>();
        keys->keys = cks::load_keys(path);
        *out = keys.release();
    });
}

cks_status cks_encode(const cks_context* ctx, const double* re, const double* im,
                      size_t n_slots, uint32_t mantissa_bits, cks_plaintext** out) {
    return guarded([&] {
        if (!ctx || !re || !out) throw std::invalid_argument("null argument");
        auto pt = std::make_unique<cks_plaintext>();
        pt->pt = cks::encode(ctx->ctx, slots_from_arrays(re, im, n_slots),
                             cks::RedFloatFormat(mantissa_bits));
        *out = pt.release();
    });
}

cks_status cks_decode(const cks_context* ctx, const cks_plaintext* pt, uint32_t mantissa_bits,
                      double* re, double* im, size_t n_slots) {
    return guarded([&] {
        if (!ctx || !pt || !re) throw std::invalid_argument("null argument");
        const auto slots = cks::decode(ctx->ctx, pt->pt, cks::RedFloatFormat(mantissa_bits));
        if (n_slots != slots.size())
            throw std::invalid_argument("slot buffer length does not match N/2");
        for (size_t i = 0; i < slots.size(); ++i) {
            re[i] = slots[i].re;
            if (im) im[i] = slots[i].im;
        }
    });
}

cks_status cks_encrypt(const cks_context* ctx, const cks_keys* keys, const cks_plaintext* pt,
                       const char* seed_hex, cks_ciphertext** out) {
    return guarded([&] {
        if (!ctx || !keys || !pt || !seed_hex || !out)
            throw std::invalid_argument("null argument");
        auto ct = std::make_unique<cks_ciphertext>();
        ct->ct = cks::encrypt(ctx->ctx, pt->pt, keys->keys, cks::Seed128::from_hex(seed_hex));
        *out = ct.release();
    });
}

cks_status cks_decrypt(const cks_context* ctx, const cks_keys* keys, const cks_ciphertext* ct,
                       cks_plaintext** out) {
    return guarded([&] {
        if (!ctx || !keys || !ct || !out) throw std::invalid_argument("null argument");
        auto pt = std::make_unique<cks_plaintext>();
        pt->pt = cks::decrypt(ctx->ctx, ct->ct, keys->keys);
        *out = pt.release();
    });
}

uint32_t cks_plaintext_level(const cks_plaintext* pt) { return pt ? pt->pt.level : 0; }

void cks_plaintext_free(cks_plaintext* pt) { delete pt; }
void cks_ciphertext_free(cks_ciphertext* ct) { delete ct; }

cks_status cks_plaintext_save(const cks_plaintext* pt, const char* path) {
    return guarded([&] {
        if (!pt || !path) throw std::invalid_argument("null argument");
        cks::save_plaintext(pt->pt, path);
    });
}

cks_status cks_plaintext_load(const char* path, cks_plaintext** out) {
    return guarded([&] {
        if (!path || !out) throw std::invalid_argument("null argument");
        auto pt = std::make_unique<cks_plaintext>();
        pt->pt = cks::load_plaintext(path);
        *out = pt.release();
    });
}

cks_status cks_ciphertext_save(const cks_ciphertext* ct, const char* path) {
    return guarded([&] {
        if (!ct || !path) throw std::invalid_argument("null argument");
        cks::save_ciphertext(ct->ct, path);
    });
}

cks_status cks_ciphertext_load(const char* path, cks_ciphertext** out) {
    return guarded([&] {
        if (!path || !out) throw std::invalid_argument("null argument");
        auto ct = std::make_unique<cks_ciphertext>();
        ct->ct = cks::load_ciphertext(path);
        *out = ct.release();
    });
}

cks_status cks_message_read(const char* path, double** re, double** im, size_t* count) {
    return guarded([&] {
        if (!path || !re || !im || !count) throw std::invalid_argument("null argument");
        const auto slots = cks::load_message(path);
        auto* r = new double[slots.size()];
        auto* i = new double[slots.size()];
        for (size_t k = 0; k < slots.size(); ++k) {
            r[k] = slots[k].re;
            i[k] = slots[k].im;
        }
        *re = r;
        *im = i;
        *count = slots.size();
    });
}

cks_status cks_message_write(const char* path, const double* re, const double* im,
                             size_t count) {
    return guarded([&] {
        if (!path || !re) throw std::invalid_argument("null argument");
        cks::save_message(slots_from_arrays(re, im, count), path);
    });
}

void cks_buffer_free(double* buffer) { delete[] buffer; }

cks_status cks_precision_sweep(const cks_context* ctx, uint32_t m_lo, uint32_t m_hi,
                               uint32_t m_step, uint32_t trials, const char* seed_hex,
                               cks_sweep_row** rows, size_t* count) {
    return guarded([&] {
        if (!ctx || !seed_hex || !rows || !count) throw std::invalid_argument("null argument");
        const auto result = cks::roundtrip_precision_sweep(ctx->ctx, m_lo, m_hi, m_step, trials,
                                                           cks::Seed128::from_hex(seed_hex));
        auto* out = new cks_sweep_row[result.size()];
        for (size_t i = 0; i < result.size(); ++i)
            out[i] = {result[i].mantissa_bits, result[i].precision_bits};
        *rows = out;
        *count = result.size();
    });
}

void cks_sweep_rows_free(cks_sweep_row* rows) { delete[] rows; }

cks_status cks_account_memory(const cks_params* params, uint32_t coeff_bits,
                              int onchip_twiddles, int onchip_randoms, cks_memory_report* out) {
    return guarded([&] {
        if (!params || !out) throw std::invalid_argument("null argument");
        const auto rep = cks::memory_accountant(to_cpp(*params), coeff_bits,
                                                {onchip_twiddles != 0, onchip_randoms != 0});
        *out = {rep.public_key_bytes, rep.masks_errors_bytes, rep.twiddles_bytes, rep.seed_bytes};
    });
}

cks_status cks_explore(uint32_t lanes, uint32_t log_n, cks_explore_row** rows, size_t* count,
                       double* reduction_vs_radix2, double* reduction_vs_radix4) {
    return guarded([&] {
        if (!rows || !count) throw std::invalid_argument("null argument");
        const auto result = cks::explore_configs(lanes, log_n);
        auto* out = new cks_explore_row[result.rows.size()];
        for (size_t i = 0; i < result.rows.size(); ++i) {
            const auto& r = result.rows[i];
            out[i] = {};
            const std::string plan = cks::plan_to_string(r.radix_plan);
            std::snprintf(out[i].plan, sizeof(out[i].plan), "%s", plan.c_str());
            out[i].merged = r.budget.merged_effective ? 1 : 0;
            out[i].modmul = r.budget.modmul_count;
            out[i].fpmul = r.budget.fpmul_count;
            out[i].shared = r.budget.shared_unit_count;
            out[i].twiddle_total = r.budget.twiddle_mult_total;
            out[i].reduction_vs_radix2 = r.reduction_vs_radix2;
        }
        *rows = out;
        *count = result.rows.size();
        if (reduction_vs_radix2) *reduction_vs_radix2 = result.reduction_vs_radix2;
        if (reduction_vs_radix4) *reduction_vs_radix4 = result.reduction_vs_radix4;
    });
}

void cks_explore_rows_free(cks_explore_row* rows) { delete[] rows; }

cks_status cks_count_multipliers(uint32_t lanes, uint32_t log_n, const char* plan, int merged,
                                 uint64_t* modmul, uint64_t* fpmul, uint64_t* shared,
                                 uint64_t* twiddle_total) {
    return guarded([&] {
        if (!plan) throw std::invalid_argument("null plan");
        cks::PipelineConfig cfg;
        cfg.lanes = lanes;
        cfg.log_n = log_n;
        cfg.radix_plan = cks::plan_from_string(plan, log_n);
        cfg.merged = merged != 0;
        const auto b = cks::count_multipliers(cfg);
        if (modmul) *modmul = b.modmul_count;
        if (fpmul) *fpmul = b.fpmul_count;
        if (shared) *shared = b.shared_unit_count;
        if (twiddle_total) *twiddle_total = b.twiddle_mult_total;
    });
}

cks_status cks_shared_budget(uint32_t lanes, uint32_t log_n, double* shared_area_um2,
                             double* disjoint_area_um2, double* baseline_area_um2,
                             double* saving_vs_disjoint, double* saving_vs_baseline) {
    return guarded([&] {
        cks::PipelineConfig best;
        best.lanes = lanes;
        best.log_n = log_n;
        const uint32_t part = log_n % 4 == 0 ? 4u : (log_n % 2 == 0 ? 2u : 1u);
        best.radix_plan.assign(log_n / part, part);
        best.merged = true;
        cks::PipelineConfig fft = best;
        fft.mode = cks::EngineMode::Fft;
        const auto rep = cks::shared_budget(cks::count_multipliers(best),
                                            cks::count_multipliers(fft), lanes, log_n);
        if (shared_area_um2) *shared_area_um2 = rep.shared_area_um2;
        if (disjoint_area_um2) *disjoint_area_um2 = rep.disjoint_area_um2;
        if (baseline_area_um2) *baseline_area_um2 = rep.baseline_area_um2;
        if (saving_vs_disjoint) *saving_vs_disjoint = rep.saving_vs_disjoint;
        if (saving_vs_baseline) *saving_vs_baseline = rep.saving_vs_baseline;
    });
}

void cks_sim_config_default(cks_sim_config* cfg) {
    if (cfg) *cfg = to_c(cks::SimConfig{});
}

cks_status cks_sim_config_from_file(const char* path, cks_sim_config* cfg) {
    return guarded([&] {
        if (!path || !cfg) throw std::invalid_argument("null argument");
        *cfg = to_c(cks::sim_config_from_kv(cks::read_kv_file(path)));
    });
}

cks_status cks_workload_from_file(const char* path, cks_workload* wl) {
    return guarded([&] {
        if (!path || !wl) throw std::invalid_argument("null argument");
        const auto w = cks::workload_from_kv(cks::read_kv_file(path));
        *wl = {w.n_encrypt, w.n_decrypt};
    });
}

cks_status cks_simulate(const cks_sim_config* cfg, const cks_workload* wl, cks_sim_report* out) {
    return guarded([&] {
        if (!cfg || !wl || !out) throw std::invalid_argument("null argument");
        *out = to_c(cks::simulate(to_cpp(*cfg), {wl->n_encrypt, wl->n_decrypt}));
    });
}

cks_status cks_lane_sweep(const cks_sim_config* cfg, const uint32_t* lanes, size_t n_lanes,
                          cks_lane_sweep_row** rows, size_t* count, uint32_t* knee_lanes) {
    return guarded([&] {
        if (!cfg || !lanes || !rows || !count) throw std::invalid_argument("null argument");
        const auto result =
            cks::lane_sweep(to_cpp(*cfg), std::vector<uint32_t>(lanes, lanes + n_lanes));
        auto* out = new cks_lane_sweep_row[result.rows.size()];
        for (size_t i = 0; i < result.rows.size(); ++i)
            out[i] = {result.rows[i].lanes, result.rows[i].throughput_ct_per_sec,
                      result.rows[i].stall_fraction, result.rows[i].steady_cycles_per_ct};
        *rows = out;
        *count = result.rows.size();
        if (knee_lanes) *knee_lanes = result.knee_lanes;
    });
}

void cks_lane_sweep_rows_free(cks_lane_sweep_row* rows) { delete[] rows; }

cks_status cks_ema_ablation(const cks_sim_config* cfg, const cks_workload* wl,
                            cks_ema_row rows[3], double* base_over_all) {
    return guarded([&] {
        if (!cfg || !wl || !rows) throw std::invalid_argument("null argument");
        const auto result = cks::ema_ablation(to_cpp(*cfg), {wl->n_encrypt, wl->n_decrypt});
        static const char* names[3] = {"base", "tf_gen", "all"};
        for (size_t i = 0; i < 3; ++i) {
            rows[i] = {};
            std::snprintf(rows[i].variant, sizeof(rows[i].variant), "%s", names[i]);
            rows[i].latency_cycles = result.rows[i].latency_cycles;
            rows[i].ema_bytes = result.rows[i].ema_bytes;
        }
        if (base_over_all) *base_over_all = result.base_over_all;
    });
}

cks_status cks_fifo_report(const cks_sim_config* cfg, cks_fifo_row** rows, size_t* count,
                           int* doubling_holds) {
    return guarded([&] {
        if (!cfg || !rows || !count) throw std::invalid_argument("null argument");
        const auto rep = cks::fifo_report(to_cpp(*cfg));
        auto* out = new cks_fifo_row[rep.stages.size()];
        for (size_t i = 0; i < rep.stages.size(); ++i)
            out[i] = {rep.stages[i].stage, rep.stages[i].declared_words,
                      rep.stages[i].observed_words};
        *rows = out;
        *count = rep.stages.size();
        if (doubling_holds) *doubling_holds = rep.doubling_holds ? 1 : 0;
    });
}

void cks_fifo_rows_free(cks_fifo_row* rows) { delete[] rows; }

cks_status cks_selftest(uint32_t max_log_n) {
    return guarded([&] {
        if (max_log_n < 4 || max_log_n > 12)
            throw std::invalid_argument("selftest wants max_log_n in [4, 12]");
        auto primes = cks::enumerate_ntt_friendly_primes(32, 36, 16);
        if (primes.size() < 3) throw std::runtime_error("selftest: prime enumeration too small");

        std::mt19937_64 rng(0x5eed);
        for (uint32_t log_n = 4; log_n <= max_log_n; log_n += 2) {
            const uint32_t n = 1u << log_n;
            const cks::NttKernel kernel(primes[0], log_n);
            const uint64_t q = kernel.q();

            // transform vs oracle, roundtrip, montgomery vs wide-integer route
            std::vector<uint64_t> a(n), b(n);
            for (auto& v : a) v = rng() % q;
            for (auto& v : b) v = rng() % q;
            std::vector<uint64_t> fast = a;
            kernel.forward_inplace_bitrev(fast.data());
            std::vector<uint64_t> natural(n);
            for (uint32_t i = 0; i < n; ++i) natural[i] = fast[cks::bit_reverse32(i, log_n)];
            const auto oracle =
                cks::reference_transform(a, q, kernel.psi(), cks::Direction::Forward);
            if (natural != oracle) throw std::runtime_error("selftest: NTT oracle mismatch");
            kernel.inverse_inplace_from_bitrev(fast.data());
            if (fast != a) throw std::runtime_error("selftest: NTT roundtrip failed");

            const auto& mont = kernel.ctx();
            for (int i = 0; i < 2000; ++i) {
                const uint64_t x = rng() % q, y = rng() % q;
                const uint64_t got = mont.from_mont(mont.mul(mont.to_mont(x), mont.to_mont(y)));
                if (got != (uint64_t)((unsigned __int128)x * y % q))
                    throw std::runtime_error("selftest: Montgomery mismatch");
            }

            // streaming schedule equivalence
            const auto sched =
                cks::build_dataflow_schedule(4, n, std::vector<uint32_t>(log_n, 1));
            const auto streamed =
                cks::stream_transform(sched, kernel, a, cks::Direction::Forward);
            if (streamed != oracle) throw std::runtime_error("selftest: streaming mismatch");
        }

        // client roundtrip at a small parameter set
        cks::CkksParams params;
        params.log_n = std::max(8u, max_log_n);
        params.levels = 3;
        const cks::CkksContext ctx(params);
        const auto seed = cks::Seed128::from_hex("00112233445566778899aabbccddeeff");
        const auto keys = cks::keygen(ctx, seed);
        std::vector<cks::RedComplex> slots(ctx.params().slot_count());
        cks::SeedStream srng(seed, "selftest/msg");
        for (auto& z : slots) {
            z.re = srng.unit_double() - 0.5;
            z.im = srng.unit_double() - 0.5;
        }
        const cks::RedFloatFormat full(52);
        const auto pt = cks::encode(ctx, slots, full);
        const auto ct = cks::encrypt(ctx, pt, keys, seed);
        const auto back = cks::decode(ctx, cks::decrypt(ctx, ct, keys), full);
        const double h = 2.0 * params.n() / 3.0;
        const double bound = (8.0 * std::sqrt(2.0) * params.sigma * params.n() +
                              6.0 * params.sigma * std::sqrt((double)params.n()) +
                              16.0 * params.sigma * std::sqrt(h * params.n())) /
                                 params.scale +
                             6.0 * std::sqrt(params.n() / 12.0) / params.scale;
        if (cks::max_slot_error(slots, back) > bound)
            throw std::runtime_error("selftest: roundtrip error above the analytic bound");
    });
}

}  // extern "C"
